//! Numeric abstractions shared by the matrix oracles and the closed-form bounds.
//!
//! Two traits cover the two kinds of arithmetic in the crate:
//!
//! * [`Scalar`] is a field element that transition matrices are built over. It is
//!   implemented for `f32`, `f64` and the exact [`Rational`](crate::Rational) type, so
//!   small kernels can be realised exactly and compared entry-for-entry.
//! * [`Real`] is a floating-point type for the spectral and expansion formulas, which
//!   involve exponentials and have no exact form.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Num, ToPrimitive};

/// Field element a transition matrix can be expressed in.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    /// The value `num / den`. `den` must be non-zero.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// Conversion from a binary floating-point value. Exact for rationals.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_f64(x: f64) -> Self {
        x as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite probability")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Floating-point type used by the closed-form bounds.
pub trait Real: Float + Debug + Send + Sync + 'static {
    /// Lossy cast from `f64`; all supported types represent every finite `f64` approximately.
    fn of(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("representable")
    }

    fn of_u64(x: u64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
