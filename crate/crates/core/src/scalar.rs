//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Symbolic work (coefficient identities, exact Jacobian ranks, determinant
//! cross-checks) runs over [`Rational`](crate::Rational); root finding and
//! fiber sampling run over `f64`. Everything in [`crate::linalg`] and the
//! evaluation routines of [`crate::poly`] is written once against [`Scalar`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

pub trait Scalar: Num + Clone + Debug + PartialEq + Send + Sync + 'static {
    /// `true` when arithmetic is exact, so a zero test is a true zero test.
    const EXACT: bool;

    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    fn to_f64(&self) -> f64;

    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test used by elimination. Exact types compare with zero;
    /// floating types use a relative threshold against `scale`.
    fn is_negligible(&self, scale: f64) -> bool;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale.max(1.0)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        f64::from(self.abs()) <= 1e-5 * scale.max(1.0)
    }
}
