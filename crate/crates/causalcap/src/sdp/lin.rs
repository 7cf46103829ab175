//! Affine scalar expressions over solver variables.
//!
//! A [`Lin`] value is `constant + Σ coeff_i · x_i`, where `x_i` are the
//! scalar variables of an SDP. Implementing [`Scalar`] lets constraint
//! operators be assembled by the same tensor-core code (trace-and-replace,
//! ns_project, partial traces) that acts on numeric operators, so the
//! program builders never duplicate those maps.

use crate::scalar::Scalar;
use std::ops::{Add, Mul, Neg, Sub};

/// Affine expression in the solver variables. Terms are kept sorted by
/// variable index with no duplicates and no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Lin {
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

impl Lin {
    pub fn constant(c: f64) -> Self {
        Lin {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn var(index: usize) -> Self {
        Lin {
            constant: 0.0,
            terms: vec![(index, 1.0)],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates the expression at a variable assignment.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .fold(self.constant, |acc, (i, c)| acc + c * x[*i])
    }

    pub fn scale_by(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Lin::constant(0.0);
        }
        Lin {
            constant: self.constant * factor,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, c * factor))
                .collect(),
        }
    }

    fn merge(&self, other: &Lin, sign: f64) -> Lin {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, ca)), Some((ib, cb))) => {
                    if ia < ib {
                        terms.push((*ia, *ca));
                        a.next();
                    } else if ib < ia {
                        terms.push((*ib, sign * cb));
                        b.next();
                    } else {
                        let c = ca + sign * cb;
                        if c != 0.0 {
                            terms.push((*ia, c));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(_), None) => {
                    terms.extend(a.by_ref().copied());
                    break;
                }
                (None, Some(_)) => {
                    terms.extend(b.by_ref().map(|(i, c)| (*i, sign * c)));
                    break;
                }
                (None, None) => break,
            }
        }
        Lin {
            constant: self.constant + sign * other.constant,
            terms,
        }
    }
}

impl Add for Lin {
    type Output = Lin;
    fn add(self, other: Lin) -> Lin {
        self.merge(&other, 1.0)
    }
}

impl Sub for Lin {
    type Output = Lin;
    fn sub(self, other: Lin) -> Lin {
        self.merge(&other, -1.0)
    }
}

impl Mul for Lin {
    type Output = Lin;
    fn mul(self, other: Lin) -> Lin {
        if other.is_constant() {
            self.scale_by(other.constant)
        } else if self.is_constant() {
            other.scale_by(self.constant)
        } else {
            panic!("product of two non-constant affine expressions is not affine")
        }
    }
}

impl Neg for Lin {
    type Output = Lin;
    fn neg(self) -> Lin {
        self.scale_by(-1.0)
    }
}

impl Scalar for Lin {
    fn zero() -> Self {
        Lin::constant(0.0)
    }
    fn one() -> Self {
        Lin::constant(1.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Lin::constant(num as f64 / den as f64)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.is_empty()
    }
}
