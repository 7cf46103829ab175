//! Matrix file format: JSON with a declared layout, a scalar domain
//! tag, and row-major entries. Rationals are written as "p/q" strings,
//! elements of ℚ(√r) as ["p/q", "s/t"] meaning p/q + (s/t)√r, and
//! complex floats as [re, im] number pairs.

use crate::error::OpError;
use crate::exact::quad::{Quad, RADICAND};
use crate::layout::SystemLayout;
use crate::op::LabeledOperator;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ScalarDomain {
    ComplexF64,
    Rational,
    Quad { radicand: i64 },
}

/// One JSON entry; the untagged encoding keeps files readable.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    /// Plain float (real part only).
    Number(f64),
    /// Rational "p/q", or a plain integer string "p".
    Rational(String),
    /// Complex [re, im] for the complex domain; [“p/q”, “s/t”] strings
    /// for the quad domain.
    Pair([serde_json::Value; 2]),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub layout: Vec<(String, usize)>,
    pub scalar_domain: ScalarDomain,
    /// Row-major, dense; length must be (total dim)².
    pub entries: Vec<EntryJson>,
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, OpError> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| OpError::Invalid(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| OpError::Invalid(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(OpError::Invalid(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(n, d))
}

fn format_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl MatrixJson {
    fn check_layout(&self) -> Result<SystemLayout, OpError> {
        let layout = SystemLayout::new(
            self.layout
                .iter()
                .map(|(l, d)| (l.as_str(), *d))
                .collect::<Vec<_>>(),
        )?;
        let dim = layout.total_dim();
        if self.entries.len() != dim * dim {
            return Err(OpError::Invalid(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                self.entries.len()
            )));
        }
        Ok(layout)
    }

    pub fn to_quad(&self) -> Result<LabeledOperator<Quad>, OpError> {
        match self.scalar_domain {
            ScalarDomain::Rational => {}
            ScalarDomain::Quad { radicand } if radicand == RADICAND => {}
            _ => {
                return Err(OpError::Invalid(format!(
                    "scalar domain {:?} is not representable in Q(sqrt {RADICAND})",
                    self.scalar_domain
                )))
            }
        }
        let layout = self.check_layout()?;
        let dim = layout.total_dim();
        let mut op = LabeledOperator::zeros(layout);
        for (idx, entry) in self.entries.iter().enumerate() {
            let value = match entry {
                EntryJson::Rational(text) => Quad::from_rational(parse_rational(text)?),
                EntryJson::Pair([a, b]) => {
                    let (Some(a), Some(b)) = (a.as_str(), b.as_str()) else {
                        return Err(OpError::Invalid(format!(
                            "quad entry must be a pair of rational strings, got {entry:?}"
                        )));
                    };
                    Quad::new(parse_rational(a)?, parse_rational(b)?)
                }
                EntryJson::Number(_) => {
                    return Err(OpError::Invalid(
                        "float entries are not exactly representable; write rationals".into(),
                    ))
                }
            };
            op.set(idx / dim, idx % dim, value);
        }
        Ok(op)
    }

    pub fn to_complex(&self) -> Result<LabeledOperator<Complex64>, OpError> {
        let layout = self.check_layout()?;
        let dim = layout.total_dim();
        let mut op = LabeledOperator::zeros(layout);
        for (idx, entry) in self.entries.iter().enumerate() {
            let value = match (&self.scalar_domain, entry) {
                (ScalarDomain::ComplexF64, EntryJson::Number(re)) => Complex64::new(*re, 0.0),
                (ScalarDomain::ComplexF64, EntryJson::Pair([re, im])) => {
                    match (re.as_f64(), im.as_f64()) {
                        (Some(re), Some(im)) => Complex64::new(re, im),
                        _ => {
                            return Err(OpError::Invalid(format!(
                                "complex entry must be a number pair, got {entry:?}"
                            )))
                        }
                    }
                }
                (ScalarDomain::Rational, EntryJson::Rational(text)) => {
                    let r = parse_rational(text)?;
                    Complex64::new(Quad::from_rational(r).to_f64(), 0.0)
                }
                (ScalarDomain::Quad { radicand }, _) if *radicand == RADICAND => {
                    return self.to_quad().and_then(|q| {
                        Ok(q.map(|v| Complex64::new(v.to_f64(), 0.0)))
                    });
                }
                _ => {
                    return Err(OpError::Invalid(format!(
                        "entry {entry:?} does not match domain {:?}",
                        self.scalar_domain
                    )))
                }
            };
            op.set(idx / dim, idx % dim, value);
        }
        Ok(op)
    }

    pub fn from_quad(op: &LabeledOperator<Quad>) -> Self {
        let all_rational = op.entries().iter().all(Quad::is_rational);
        let entries = op
            .entries()
            .iter()
            .map(|v| {
                if all_rational {
                    EntryJson::Rational(format_rational(&v.a))
                } else {
                    EntryJson::Pair([
                        serde_json::Value::String(format_rational(&v.a)),
                        serde_json::Value::String(format_rational(&v.b)),
                    ])
                }
            })
            .collect();
        MatrixJson {
            layout: op
                .layout()
                .systems()
                .iter()
                .map(|(l, d)| (l.clone(), *d))
                .collect(),
            scalar_domain: if all_rational {
                ScalarDomain::Rational
            } else {
                ScalarDomain::Quad { radicand: RADICAND }
            },
            entries,
        }
    }
}

pub fn save_matrix(path: &std::path::Path, matrix: &MatrixJson) -> Result<(), OpError> {
    let text = serde_json::to_string_pretty(matrix)
        .map_err(|e| OpError::Invalid(format!("serialization failed: {e}")))?;
    std::fs::write(path, text).map_err(|e| OpError::Invalid(format!("write failed: {e}")))
}

pub fn load_matrix(path: &std::path::Path) -> Result<MatrixJson, OpError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| OpError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| OpError::Invalid(format!("cannot parse {}: {e}", path.display())))
}
