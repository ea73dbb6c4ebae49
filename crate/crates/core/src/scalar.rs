//! Scalar abstractions.
//!
//! The corner-cutting scheme only ever needs field operations, so it runs over
//! [`Scalar`], which includes exact rationals. Everything that touches `t^x`
//! (basis functions, curve evaluation, log-space products) needs [`Real`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Field-like scalar: enough for exponent bookkeeping and convex combinations.
pub trait Scalar:
    Num + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `false` for NaN and infinities; always `true` for exact types.
    fn is_finite_scalar(&self) -> bool;

    /// Converts a configuration constant. Panics only on non-finite input,
    /// which every caller has already rejected.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| panic!("{x} is not representable"))
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits the scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalar used for basis evaluation.
pub trait Real: Scalar + Float {}

impl Scalar for f32 {
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    fn is_finite_scalar(&self) -> bool {
        self.is_finite()
    }
}

impl Real for f32 {}
impl Real for f64 {}

impl Scalar for BigRational {
    fn is_finite_scalar(&self) -> bool {
        true
    }

    fn lit(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| panic!("{x} is not representable"))
    }

    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}
