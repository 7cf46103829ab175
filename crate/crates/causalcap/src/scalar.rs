//! Scalar domains for labeled operators.
//!
//! The same tensor operations serve three arithmetic regimes: `f64` /
//! `Complex64` for solver-facing numerics, `BigRational` for exact rational
//! data, and [`Quad`](crate::exact::Quad) for the quadratic extension used by
//! the certificate checks. [`Lin`](crate::sdp::Lin) also implements [`Scalar`]
//! so that SDP constraint operators are assembled by the exact same code paths
//! that act on numeric operators.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// A commutative scalar domain with exact or approximate arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// The rational constant `num / den`. Used for the exact divisions by
    /// subsystem dimensions in trace-and-replace maps.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// Scalars with a notion of magnitude, for residual norms in float checks.
pub trait AbsScalar: Scalar {
    fn abs_val(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn conj(&self) -> Self {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl AbsScalar for f64 {
    fn abs_val(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::ZERO
    }
    fn one() -> Self {
        Complex64::ONE
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        *self == Complex64::ZERO
    }
}

impl AbsScalar for Complex64 {
    fn abs_val(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Exact ordered fields: support division and an exact sign.
pub trait ExactScalar: Scalar + std::ops::Div<Output = Self> {
    /// Exact sign: -1, 0, or +1.
    fn sign(&self) -> i8;
}

impl ExactScalar for BigRational {
    fn sign(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}
