//! Number types the distribution functions are generic over.
//!
//! `f64` serves sampled and closed-form laws; [`Rational64`] gives exact
//! arithmetic for the finite-system oracles.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{Num, Signed};

pub use num_rational::Rational64 as Rational;

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Slope decreases at or below this size count as ties in concavity checks.
    fn tie_tolerance() -> Self;

    fn to_f64(&self) -> f64;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn tie_tolerance() -> Self {
        1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }
}

impl Scalar for Rational64 {
    fn tie_tolerance() -> Self {
        Rational64::from_integer(0)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational64::new(numer, denom)
    }
}
