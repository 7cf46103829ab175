//! Float eigenvalue helpers bridging labeled operators and nalgebra.

use crate::error::OpError;
use crate::op::LabeledOperator;
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

pub fn to_dmatrix_f64(op: &LabeledOperator<f64>) -> DMatrix<f64> {
    let d = op.dim();
    DMatrix::from_fn(d, d, |i, j| *op.get(i, j))
}

pub fn to_dmatrix_c64(op: &LabeledOperator<Complex64>) -> DMatrix<Complex<f64>> {
    let d = op.dim();
    DMatrix::from_fn(d, d, |i, j| *op.get(i, j))
}

/// Minimum eigenvalue of the symmetric part.
pub fn min_eigenvalue_f64(op: &LabeledOperator<f64>) -> f64 {
    let m = to_dmatrix_f64(op);
    let sym = (&m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Minimum eigenvalue of the Hermitian part.
pub fn min_eigenvalue_c64(op: &LabeledOperator<Complex64>) -> f64 {
    let m = to_dmatrix_c64(op);
    let herm = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Drop imaginary parts, failing if any exceed `tol`.
pub fn real_part(
    op: &LabeledOperator<Complex64>,
    tol: f64,
) -> Result<LabeledOperator<f64>, OpError> {
    let worst = op
        .entries()
        .iter()
        .fold(0.0f64, |w, z| w.max(z.im.abs()));
    let out = op.map(|z| z.re);
    if worst > tol {
        return Err(OpError::Invalid(format!(
            "operator has imaginary entries up to {worst:.3e}"
        )));
    }
    Ok(out)
}

pub fn complexify(op: &LabeledOperator<f64>) -> LabeledOperator<Complex64> {
    op.map(|x| Complex64::new(*x, 0.0))
}
