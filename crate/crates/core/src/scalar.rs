//! Scalar abstraction shared by every exact computation in the crate.
//!
//! The credal computations only need ring operations and comparisons, so they
//! run unchanged over `f32`, `f64` and arbitrary-precision rationals. Anything
//! transcendental (powers, logarithms, exponentials) additionally asks for
//! [`num_traits::Float`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Number type usable by the credal engine.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Absolute slack used for normalization checks and "equal up to rounding"
    /// comparisons. Zero for exact types.
    fn tolerance() -> Self;

    /// Weights in `[-negative_slack, 0)` are accepted and clamped to zero.
    fn negative_slack() -> Self;

    fn is_finite_value(&self) -> bool;

    /// Lossy conversion used by reports. Exact types round to nearest.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Conversion from a literal. Exact types take the exact binary value.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::zero)
    }

    /// Exact types report `true`; tolerances are then zero.
    const EXACT: bool;
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
    fn negative_slack() -> Self {
        1e-15
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    const EXACT: bool = false;
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
    fn negative_slack() -> Self {
        1e-7
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
    fn negative_slack() -> Self {
        BigRational::zero()
    }
    fn is_finite_value(&self) -> bool {
        true
    }
    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }
    const EXACT: bool = true;
}

/// Builds an exact rational `numer / denom`.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Index and value of the maximum; ties resolve to the lowest index.
pub(crate) fn argmax<T: Scalar>(items: impl IntoIterator<Item = T>) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in items.into_iter().enumerate() {
        match &best {
            Some((_, b)) if v <= *b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Index and value of the minimum; ties resolve to the lowest index.
pub(crate) fn argmin<T: Scalar>(items: impl IntoIterator<Item = T>) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, v) in items.into_iter().enumerate() {
        match &best {
            Some((_, b)) if v >= *b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn clamp<T: Scalar>(x: T, lo: T, hi: T) -> T {
    min_of(max_of(x, lo), hi)
}
