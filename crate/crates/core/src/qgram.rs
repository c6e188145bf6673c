//! q-gram profiles and the q-gram (L1 profile) distance.
//!
//! For `q = 3` the q-gram distance is at most six times the edit distance,
//! which makes it a cheap filter for best-match candidates.

use crate::model::{symbol_index, Read};

/// Largest supported `q`; profiles are dense vectors of `4^q` counts.
pub const MAX_Q: usize = 10;

/// Occurrence counts of every length-`q` string over `{A, C, G, T}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGramProfile {
    q: usize,
    counts: Vec<u32>,
}

impl QGramProfile {
    pub fn q(&self) -> usize {
        self.q
    }

    /// Dense counts indexed by the base-4 code of the q-gram (A=0, C=1, G=2, T=3).
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Count of a specific q-gram, given as text.
    pub fn count_of(&self, gram: &str) -> u32 {
        assert_eq!(gram.len(), self.q, "q-gram length mismatch");
        let code = gram.bytes().fold(0usize, |code, s| {
            code * 4 + symbol_index(s.to_ascii_uppercase()).expect("non-nucleotide q-gram")
        });
        self.counts[code]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// L1 distance to another profile with the same `q`.
    pub fn l1_distance(&self, other: &QGramProfile) -> u64 {
        assert_eq!(self.q, other.q, "profiles with different q");
        self.counts
            .iter()
            .zip(&other.counts)
            .map(|(&x, &y)| u64::from(x.abs_diff(y)))
            .sum()
    }
}

/// Counts every contiguous length-`q` window of `read`.
///
/// # Panics
///
/// If `q == 0` or `q > MAX_Q`.
pub fn qgram_profile(read: &Read, q: usize) -> QGramProfile {
    assert!((1..=MAX_Q).contains(&q), "q must lie in 1..={MAX_Q}, got {q}");
    let mut counts = vec![0u32; 1 << (2 * q)];
    let bytes = read.as_bytes();
    if bytes.len() >= q {
        let mask = (1usize << (2 * q)) - 1;
        let mut code = 0usize;
        for (i, &s) in bytes.iter().enumerate() {
            let sym = symbol_index(s).expect("reads hold only nucleotides");
            code = ((code << 2) | sym) & mask;
            if i + 1 >= q {
                counts[code] += 1;
            }
        }
    }
    QGramProfile { q, counts }
}

pub fn qgram_distance(a: &Read, b: &Read, q: usize) -> u64 {
    qgram_profile(a, q).l1_distance(&qgram_profile(b, q))
}
