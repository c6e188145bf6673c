//! Seeded random number generation.
//!
//! All randomness goes through ChaCha8 (`rand_chacha`), seeded from a 64-bit
//! value. Per-item streams are derived from the base seed and the item's
//! label, so results never depend on processing order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a label (FNV-1a) into an independent stream seed.
pub fn derive_seed(base: u64, label: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(base ^ splitmix64(hash))
}

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn for_label(base: u64, label: &str) -> Rng {
    seeded(derive_seed(base, label))
}
