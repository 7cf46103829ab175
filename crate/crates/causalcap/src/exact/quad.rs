//! Arithmetic in the real quadratic field ℚ(√10).
//!
//! The amplitude damping Choi operator at η = 0.1 has entries in
//! ℚ(√10) (through √0.9 = 3/√10 = (3/10)√10), and so do the paper's
//! certificate matrices. All field operations and the sign test are
//! exact; no value ever leaves the field.

use crate::scalar::{ExactScalar, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// The fixed square-free radicand of the extension.
pub const RADICAND: i64 = 10;

/// An element a + b√10 with rational a, b.
#[derive(Clone, PartialEq, Eq)]
pub struct Quad {
    pub a: BigRational,
    pub b: BigRational,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Quad { a, b }
    }

    /// The rational p/q as a field element.
    pub fn from_rational(a: BigRational) -> Self {
        Quad {
            a,
            b: <BigRational as Zero>::zero(),
        }
    }

    /// (p/q)·√10.
    pub fn sqrt10_times(b: BigRational) -> Self {
        Quad {
            a: <BigRational as Zero>::zero(),
            b,
        }
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    /// The field conjugate a − b√10 (not complex conjugation).
    pub fn field_conj(&self) -> Self {
        Quad {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// The rational norm (a + b√10)(a − b√10) = a² − 10b².
    pub fn norm(&self) -> BigRational {
        let r = BigRational::from(BigInt::from(RADICAND));
        &self.a * &self.a - r * (&self.b * &self.b)
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (RADICAND as f64).sqrt()
    }
}

fn rational_to_f64(x: &BigRational) -> f64 {
    let numer = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let denom = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    numer / denom
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else if Zero::is_zero(&self.a) {
            write!(f, "({})*sqrt(10)", self.b)
        } else {
            write!(f, "{} + ({})*sqrt(10)", self.a, self.b)
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        Quad {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        Quad {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        let r = BigRational::from(BigInt::from(RADICAND));
        Quad {
            a: &self.a * &rhs.a + r * (&self.b * &rhs.b),
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Div for Quad {
    type Output = Quad;
    fn div(self, rhs: Quad) -> Quad {
        let norm = rhs.norm();
        if Zero::is_zero(&norm) {
            panic!("division by zero in Q(sqrt 10)");
        }
        let conj = rhs.field_conj();
        let prod = self * conj;
        Quad {
            a: prod.a / norm.clone(),
            b: prod.b / norm,
        }
    }
}

impl Scalar for Quad {
    fn zero() -> Self {
        Quad::from_rational(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        Quad::from_rational(<BigRational as One>::one())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Quad::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn conj(&self) -> Self {
        // Elements of a real field are self-conjugate under complex
        // conjugation; the field conjugate is a separate operation.
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
}

impl ExactScalar for Quad {
    fn sign(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, s) | (s, 0) => s,
            (sa, sb) if sa == sb => sa,
            // Opposite signs: a + b√10 has the sign of the dominant
            // term; compare a² against 10b² by cross-multiplication.
            (sa, _) => {
                let r = BigRational::from(BigInt::from(RADICAND));
                let lhs = &self.a * &self.a;
                let rhs = r * (&self.b * &self.b);
                match lhs.cmp(&rhs) {
                    std::cmp::Ordering::Greater => sa,
                    std::cmp::Ordering::Less => -sa,
                    std::cmp::Ordering::Equal => 0,
                }
            }
        }
    }
}

fn rational_sign(x: &BigRational) -> i8 {
    if Zero::is_zero(x) {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn quad(an: i64, ad: i64, bn: i64, bd: i64) -> Quad {
        Quad::new(q(an, ad), q(bn, bd))
    }

    #[test]
    fn field_axioms_spot_checks() {
        let x = quad(1, 2, -3, 5);
        let y = quad(7, 3, 1, 4);
        let z = (x.clone() * y.clone()) / y.clone();
        assert_eq!(z, x);
        let w = x.clone() - x.clone();
        assert!(Scalar::is_zero(&w));
        assert_eq!(x.clone() * Quad::one(), x);
    }

    #[test]
    fn sqrt_squares_to_radicand() {
        let root = Quad::sqrt10_times(q(1, 1));
        assert_eq!(root.clone() * root, Quad::from_ratio(10, 1));
    }

    #[test]
    fn sign_cases() {
        assert_eq!(Quad::zero().sign(), 0);
        assert_eq!(quad(3, 1, 1, 2).sign(), 1);
        assert_eq!(quad(-3, 1, -1, 2).sign(), -1);
        // 19/6 − √10 > 0 because (19/6)² = 361/36 > 10.
        assert_eq!(quad(19, 6, -1, 1).sign(), 1);
        // 3 − √10 < 0 because 9 < 10.
        assert_eq!(quad(3, 1, -1, 1).sign(), -1);
        assert_eq!(quad(-19, 6, 1, 1).sign(), -1);
        assert_eq!(quad(-3, 1, 1, 1).sign(), 1);
    }

    #[test]
    fn sign_matches_float_on_random_elements() {
        for an in -5i64..6 {
            for bn in -5i64..6 {
                let x = Quad::new(q(an, 3), q(bn, 7));
                let float = x.to_f64();
                let expected = if float.abs() < 1e-12 {
                    0
                } else if float > 0.0 {
                    1
                } else {
                    -1
                };
                assert_eq!(x.sign(), expected, "{an}/3 + ({bn}/7) sqrt10");
            }
        }
    }

    #[test]
    fn division_by_zero_panics() {
        let x = quad(1, 1, 0, 1);
        let result = std::panic::catch_unwind(|| x / Quad::zero());
        assert!(result.is_err());
    }
}
