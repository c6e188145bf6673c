//! Numeric abstraction for distance values.
//!
//! Every distance in the crate is computed in a type implementing [`Scalar`].
//! `f64` is the workhorse; `Rational64` gives exact arithmetic for checking
//! identities such as the Monge-Elkan counterexample values.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A number usable as a distance: exact rationals or IEEE floats.
pub trait Scalar: Num + FromPrimitive + ToPrimitive + PartialOrd + Copy + Debug + Send + Sync + 'static {
    /// Converts a count into the scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }

    /// Lossy view as `f64`, used for reporting and correlation statistics.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl<T> Scalar for T where T: Num + FromPrimitive + ToPrimitive + PartialOrd + Copy + Debug + Send + Sync + 'static {}
