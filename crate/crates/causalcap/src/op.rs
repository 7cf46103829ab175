//! Labeled multilinear operator algebra.
//!
//! A [`LabeledOperator`] is a dense square matrix tagged with a
//! [`SystemLayout`] naming its tensor factors. All operations here are pure
//! and generic over the scalar domain, so the same code path serves float
//! solving and exact certificate verification.

use crate::error::OpError;
use crate::layout::SystemLayout;
use crate::scalar::{AbsScalar, Scalar};

/// A dense square operator over a labeled tensor-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator<T: Scalar> {
    layout: SystemLayout,
    entries: Vec<T>,
}

/// One term of a signed trace-and-replace combination: `sign` times the map
/// that traces out `labels` and re-inserts the maximally mixed state on them.
/// Empty `labels` is the identity term.
#[derive(Clone, Debug)]
pub struct TraceReplaceTerm {
    pub sign: i8,
    pub labels: Vec<String>,
}

impl TraceReplaceTerm {
    pub fn new<L: Into<String>>(sign: i8, labels: Vec<L>) -> Self {
        Self {
            sign,
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }
}

impl<T: Scalar> LabeledOperator<T> {
    pub fn new(layout: SystemLayout, entries: Vec<T>) -> Result<Self, OpError> {
        let dim = layout.total_dim();
        if entries.len() != dim * dim {
            return Err(OpError::ShapeMismatch {
                entries: entries.len(),
                dim,
            });
        }
        Ok(Self { layout, entries })
    }

    pub fn zeros(layout: SystemLayout) -> Self {
        let dim = layout.total_dim();
        Self {
            entries: vec![T::zero(); dim * dim],
            layout,
        }
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let dim = layout.total_dim();
        let mut op = Self::zeros(layout);
        for i in 0..dim {
            op.entries[i * dim + i] = T::one();
        }
        op
    }

    pub fn from_fn(layout: SystemLayout, f: impl Fn(usize, usize) -> T) -> Self {
        let dim = layout.total_dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { layout, entries }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        let dim = self.dim();
        self.entries[row * dim + col] = value;
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LabeledOperator<U> {
        LabeledOperator {
            layout: self.layout.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, OpError> {
        self.check_same_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OpError> {
        self.check_same_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            layout: self.layout.clone(),
            entries: self
                .entries
                .iter()
                .map(|a| factor.clone() * a.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            layout: self.layout.clone(),
            entries: self.entries.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn trace(&self) -> T {
        let dim = self.dim();
        let mut acc = T::zero();
        for i in 0..dim {
            acc = acc + self.entries[i * dim + i].clone();
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let dim = self.dim();
        Self::from_fn(self.layout.clone(), |i, j| {
            self.entries[j * dim + i].clone()
        })
    }

    pub fn conj_transpose(&self) -> Self {
        let dim = self.dim();
        Self::from_fn(self.layout.clone(), |i, j| {
            self.entries[j * dim + i].conj()
        })
    }

    /// Explicit symmetrization `(M + M†)/2`, applied once at ingestion of
    /// solver output.
    pub fn symmetrize(&self) -> Self {
        let half = T::from_ratio(1, 2);
        let dim = self.dim();
        Self::from_fn(self.layout.clone(), |i, j| {
            half.clone()
                * (self.entries[i * dim + j].clone() + self.entries[j * dim + i].conj())
        })
    }

    /// Exact Hermiticity: `entry(i,j) = conj(entry(j,i))` for every entry.
    pub fn is_hermitian(&self) -> bool {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                if self.entries[i * dim + j] != self.entries[j * dim + i].conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix product; both operands must share a layout.
    pub fn matmul(&self, other: &Self) -> Result<Self, OpError> {
        self.check_same_layout(other)?;
        let dim = self.dim();
        let mut entries = vec![T::zero(); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = &self.entries[i * dim + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = &other.entries[k * dim + j];
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * dim + j] =
                        entries[i * dim + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            entries,
        })
    }

    /// Kronecker product under the index convention; label sets must be
    /// disjoint.
    pub fn tensor(&self, other: &Self) -> Result<Self, OpError> {
        let layout = self.layout.concat(&other.layout)?;
        let (da, db) = (self.dim(), other.dim());
        let dim = da * db;
        let mut entries = vec![T::zero(); dim * dim];
        for ia in 0..da {
            for ja in 0..da {
                let a = &self.entries[ia * da + ja];
                if a.is_zero() {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        let b = &other.entries[ib * db + jb];
                        if b.is_zero() {
                            continue;
                        }
                        let row = ia * db + ib;
                        let col = ja * db + jb;
                        entries[row * dim + col] = a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(Self { layout, entries })
    }

    /// Partial trace over the listed labels. Tracing everything yields a
    /// scalar-valued operator over the empty layout.
    pub fn partial_trace(&self, labels: &[&str]) -> Result<Self, OpError> {
        let traced = self.layout.positions(labels)?;
        let keep: Vec<usize> = (0..self.layout.len())
            .filter(|p| !traced.contains(p))
            .collect();
        let out_layout = self.layout.select(&keep);
        let traced_layout = self.layout.select(&traced);
        let out_dim = out_layout.total_dim();
        let trace_dim = traced_layout.total_dim();
        let nsys = self.layout.len();
        let dim = self.dim();

        let mut entries = vec![T::zero(); out_dim * out_dim];
        let mut row_digits = vec![0usize; nsys];
        let mut col_digits = vec![0usize; nsys];
        for r in 0..out_dim {
            let r_out = out_layout.decompose(r);
            for c in 0..out_dim {
                let c_out = out_layout.decompose(c);
                let mut acc = T::zero();
                for t in 0..trace_dim {
                    let t_digits = traced_layout.decompose(t);
                    for (k, &p) in keep.iter().enumerate() {
                        row_digits[p] = r_out[k];
                        col_digits[p] = c_out[k];
                    }
                    for (k, &p) in traced.iter().enumerate() {
                        row_digits[p] = t_digits[k];
                        col_digits[p] = t_digits[k];
                    }
                    let row = self.layout.compose(&row_digits);
                    let col = self.layout.compose(&col_digits);
                    acc = acc + self.entries[row * dim + col].clone();
                }
                entries[r * out_dim + c] = acc;
            }
        }
        Ok(Self {
            layout: out_layout,
            entries,
        })
    }

    /// Transpose applied only on the listed tensor factors. Involutive.
    pub fn partial_transpose(&self, labels: &[&str]) -> Result<Self, OpError> {
        let flipped = self.layout.positions(labels)?;
        let dim = self.dim();
        let mut entries = vec![T::zero(); dim * dim];
        for row in 0..dim {
            let mut r_digits = self.layout.decompose(row);
            for col in 0..dim {
                let mut c_digits = self.layout.decompose(col);
                for &p in &flipped {
                    std::mem::swap(&mut r_digits[p], &mut c_digits[p]);
                }
                let new_row = self.layout.compose(&r_digits);
                let new_col = self.layout.compose(&c_digits);
                entries[new_row * dim + new_col] = self.entries[row * dim + col].clone();
                // restore for next col iteration
                r_digits = self.layout.decompose(row);
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            entries,
        })
    }

    /// `tr_S[J] ⊗ 1_S/d_S`, re-inserted in the original layout order.
    fn trace_replace_one(&self, labels: &[&str]) -> Result<Self, OpError> {
        if labels.is_empty() {
            return Ok(self.clone());
        }
        let traced_pos = self.layout.positions(labels)?;
        let keep: Vec<usize> = (0..self.layout.len())
            .filter(|p| !traced_pos.contains(p))
            .collect();
        let reduced = self.partial_trace(labels)?;
        let keep_layout = self.layout.select(&keep);
        let d_sub: usize = traced_pos.iter().map(|&p| self.layout.systems()[p].1).product();
        let inv = T::from_ratio(1, d_sub as i64);
        let dim = self.dim();
        let rdim = keep_layout.total_dim();
        let mut entries = vec![T::zero(); dim * dim];
        for row in 0..dim {
            let r_digits = self.layout.decompose(row);
            for col in 0..dim {
                let c_digits = self.layout.decompose(col);
                if traced_pos.iter().any(|&p| r_digits[p] != c_digits[p]) {
                    continue;
                }
                let r_keep: Vec<usize> = keep.iter().map(|&p| r_digits[p]).collect();
                let c_keep: Vec<usize> = keep.iter().map(|&p| c_digits[p]).collect();
                let rr = keep_layout.compose(&r_keep);
                let cc = keep_layout.compose(&c_keep);
                entries[row * dim + col] =
                    inv.clone() * reduced.entries[rr * rdim + cc].clone();
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            entries,
        })
    }

    /// Signed combination of trace-and-replace maps, `Σ_j s_j · (S_j)J`.
    pub fn trace_and_replace(&self, terms: &[TraceReplaceTerm]) -> Result<Self, OpError> {
        let mut acc = LabeledOperator::zeros(self.layout.clone());
        for term in terms {
            let labels: Vec<&str> = term.labels.iter().map(String::as_str).collect();
            let part = self.trace_replace_one(&labels)?;
            acc = match term.sign {
                1 => acc.add(&part)?,
                -1 => acc.sub(&part)?,
                s => {
                    return Err(OpError::Invalid(format!(
                        "trace-and-replace sign must be ±1, got {s}"
                    )))
                }
            };
        }
        Ok(acc)
    }

    /// Orthogonal projection onto the span of Choi operators of no-signaling
    /// multipartite channels: the composition over all pairs `(X_j, Y_j)` of
    /// `[1 - Y_j + X_jY_j]`.
    pub fn ns_project(&self, pairs: &[(&str, &str)]) -> Result<Self, OpError> {
        let mut seen: Vec<&str> = Vec::new();
        for (x, y) in pairs {
            for l in [x, y] {
                self.layout.position(l)?;
                if seen.contains(l) {
                    return Err(OpError::OverlappingPairs(l.to_string()));
                }
                seen.push(l);
            }
        }
        let mut cur = self.clone();
        for (x, y) in pairs {
            cur = cur.trace_and_replace(&[
                TraceReplaceTerm::new(1, Vec::<String>::new()),
                TraceReplaceTerm::new(-1, vec![*y]),
                TraceReplaceTerm::new(1, vec![*x, *y]),
            ])?;
        }
        Ok(cur)
    }

    /// Link product `P ⋆ Q = tr_B[(P ⊗ 1_C)(1_A ⊗ Q^{T_B})]`, contracting the
    /// shared labels `B`. The result lives on the symmetric difference of the
    /// label sets, `P`-only labels first.
    pub fn link_product(&self, other: &Self) -> Result<Self, OpError> {
        let shared: Vec<&str> = self
            .layout
            .labels()
            .filter(|l| other.layout.contains(l))
            .collect();
        for l in &shared {
            let da = self.layout.dim_of(l)?;
            let db = other.layout.dim_of(l)?;
            if da != db {
                return Err(OpError::DimMismatch {
                    label: l.to_string(),
                    a: da,
                    b: db,
                });
            }
        }
        let q_only: Vec<usize> = (0..other.layout.len())
            .filter(|&p| !self.layout.contains(&other.layout.systems()[p].0))
            .collect();
        let p_only: Vec<usize> = (0..self.layout.len())
            .filter(|&p| {
                !shared
                    .iter()
                    .any(|l| *l == self.layout.systems()[p].0)
            })
            .collect();

        let qt = other.partial_transpose(&shared)?;
        let ext_p = self.tensor(&LabeledOperator::identity(other.layout.select(&q_only)))?;
        let ext_q = LabeledOperator::identity(self.layout.select(&p_only)).tensor(&qt)?;
        let order: Vec<&str> = ext_p.layout.labels().collect();
        let ext_q = ext_q.permute_systems(&order)?;
        let prod = ext_p.matmul(&ext_q)?;
        prod.partial_trace(&shared)
    }

    /// Re-index so the operator is numerically equal as an abstract tensor
    /// under the new label order.
    pub fn permute_systems(&self, new_order: &[&str]) -> Result<Self, OpError> {
        if new_order.len() != self.layout.len() {
            return Err(OpError::NotPermutation);
        }
        let mut positions = Vec::with_capacity(new_order.len());
        for l in new_order {
            let p = self
                .layout
                .position(l)
                .map_err(|_| OpError::NotPermutation)?;
            if positions.contains(&p) {
                return Err(OpError::NotPermutation);
            }
            positions.push(p);
        }
        let new_layout = self.layout.select(&positions);
        let dim = self.dim();
        let mut entries = vec![T::zero(); dim * dim];
        for row in 0..dim {
            let r_digits = self.layout.decompose(row);
            for col in 0..dim {
                let c_digits = self.layout.decompose(col);
                let r_new: Vec<usize> = positions.iter().map(|&p| r_digits[p]).collect();
                let c_new: Vec<usize> = positions.iter().map(|&p| c_digits[p]).collect();
                let nr = new_layout.compose(&r_new);
                let nc = new_layout.compose(&c_new);
                entries[nr * dim + nc] = self.entries[row * dim + col].clone();
            }
        }
        Ok(Self {
            layout: new_layout,
            entries,
        })
    }

    fn check_same_layout(&self, other: &Self) -> Result<(), OpError> {
        if self.layout != other.layout {
            return Err(OpError::LayoutMismatch(format!(
                "{:?} vs {:?}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }
}

impl<T: AbsScalar> LabeledOperator<T> {
    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.abs_val())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from another operator.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, OpError> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.conj_transpose())
            .expect("same layout")
            .max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn qubit_pair() -> SystemLayout {
        SystemLayout::new(vec![("X", 2), ("Y", 2)]).unwrap()
    }

    fn gamma() -> LabeledOperator<f64> {
        // unnormalized maximally entangled projector on two qubits
        let mut op = LabeledOperator::zeros(qubit_pair());
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            op.set(i, j, 1.0);
        }
        op
    }

    #[test]
    fn tensor_identities() {
        let ix = LabeledOperator::<f64>::identity(SystemLayout::new(vec![("X", 2)]).unwrap());
        let iy = LabeledOperator::<f64>::identity(SystemLayout::new(vec![("Y", 2)]).unwrap());
        let prod = ix.tensor(&iy).unwrap();
        assert_eq!(prod, LabeledOperator::identity(qubit_pair()));
    }

    #[test]
    fn tensor_basis_projectors() {
        let lx = SystemLayout::new(vec![("X", 2)]).unwrap();
        let ly = SystemLayout::new(vec![("Y", 2)]).unwrap();
        let mut p0 = LabeledOperator::<f64>::zeros(lx);
        p0.set(0, 0, 1.0);
        let mut p1 = LabeledOperator::<f64>::zeros(ly);
        p1.set(1, 1, 1.0);
        let t = p0.tensor(&p1).unwrap();
        let expect: Vec<f64> = (0..16)
            .map(|k| if k == 1 * 4 + 1 { 1.0 } else { 0.0 })
            .collect();
        assert_eq!(t.entries(), &expect[..]);
    }

    #[test]
    fn tensor_sigma_x() {
        let lx = SystemLayout::new(vec![("X", 2)]).unwrap();
        let ly = SystemLayout::new(vec![("Y", 2)]).unwrap();
        let sx = LabeledOperator::new(lx, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let sy = LabeledOperator::new(ly, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let t = sx.tensor(&sy).unwrap();
        // antidiagonal ones, from the direct 4x4 Kronecker expansion
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(*t.get(i, j), expect);
            }
        }
    }

    #[test]
    fn tensor_duplicate_label_rejected() {
        let lx = SystemLayout::new(vec![("X", 2)]).unwrap();
        let a = LabeledOperator::<f64>::identity(lx.clone());
        let b = LabeledOperator::<f64>::identity(lx);
        let err = a.tensor(&b).unwrap_err();
        assert!(matches!(err, OpError::DuplicateLabel(l) if l == "X"));
    }

    #[test]
    fn gamma_marginal() {
        let g = gamma();
        let marg = g.partial_trace(&["Y"]).unwrap();
        assert_eq!(
            marg,
            LabeledOperator::identity(SystemLayout::new(vec![("X", 2)]).unwrap())
        );
    }

    #[test]
    fn full_trace_is_scalar() {
        let g = gamma();
        let s = g.partial_trace(&["X", "Y"]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(*s.get(0, 0), 2.0);
    }

    #[test]
    fn empty_trace_is_identity_map() {
        let g = gamma();
        assert_eq!(g.partial_trace(&[]).unwrap(), g);
    }

    #[test]
    fn unknown_label_rejected() {
        let g = gamma();
        assert!(matches!(
            g.partial_trace(&["Z"]).unwrap_err(),
            OpError::UnknownLabel(_)
        ));
    }

    #[test]
    fn partial_transpose_gamma_is_swap() {
        let g = gamma();
        let pt = g.partial_transpose(&["Y"]).unwrap();
        // entrywise check: SWAP on two qubits
        for i in 0..4 {
            for j in 0..4 {
                let (i0, i1) = (i / 2, i % 2);
                let expect = if j == i1 * 2 + i0 { 1.0 } else { 0.0 };
                assert_eq!(*pt.get(i, j), expect, "at ({i},{j})");
            }
        }
    }

    #[test]
    fn partial_transpose_involutive() {
        let g = gamma();
        let twice = g
            .partial_transpose(&["X"])
            .unwrap()
            .partial_transpose(&["X"])
            .unwrap();
        assert_eq!(twice, g);
    }

    #[test]
    fn trace_replace_identity_fixed_point() {
        let id = LabeledOperator::<f64>::identity(qubit_pair());
        let out = id
            .trace_and_replace(&[TraceReplaceTerm::new(1, vec!["Y"])])
            .unwrap();
        assert_eq!(out, id);
    }

    #[test]
    fn trace_replace_gamma_hand_expansion() {
        // [1 - Y] applied to the unnormalized maximally entangled projector:
        // tr_Y Γ = I_X, so (Y)Γ = I_X ⊗ I_Y/2, and [1-Y]Γ = Γ - I/2.
        let g = gamma();
        let out = g
            .trace_and_replace(&[
                TraceReplaceTerm::new(1, Vec::<String>::new()),
                TraceReplaceTerm::new(-1, vec!["Y"]),
            ])
            .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = g.get(i, j) - if i == j { 0.5 } else { 0.0 };
                assert!((out.get(i, j) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_replace_cancellation() {
        // [1 - Y + XY] on I equals I - I + I = I by linearity.
        let id = LabeledOperator::<f64>::identity(qubit_pair());
        let out = id
            .trace_and_replace(&[
                TraceReplaceTerm::new(1, Vec::<String>::new()),
                TraceReplaceTerm::new(-1, vec!["Y"]),
                TraceReplaceTerm::new(1, vec!["X", "Y"]),
            ])
            .unwrap();
        assert_eq!(out, id);
    }

    #[test]
    fn ns_project_fixes_identity() {
        let id = LabeledOperator::<f64>::identity(qubit_pair());
        let out = id.ns_project(&[("X", "Y")]).unwrap();
        assert_eq!(out, id);
    }

    #[test]
    fn ns_project_overlapping_pairs_rejected() {
        let layout = SystemLayout::new(vec![("X", 2), ("Y", 2), ("Z", 2)]).unwrap();
        let id = LabeledOperator::<f64>::identity(layout);
        let err = id.ns_project(&[("X", "Y"), ("Y", "Z")]).unwrap_err();
        assert!(matches!(err, OpError::OverlappingPairs(_)));
    }

    #[test]
    fn link_product_full_overlap_is_trace() {
        let id = LabeledOperator::<f64>::identity(qubit_pair());
        let out = id.link_product(&id).unwrap();
        assert_eq!(out.dim(), 1);
        assert_eq!(*out.get(0, 0), 4.0);
    }

    #[test]
    fn link_product_identity_composition() {
        let lxy = SystemLayout::new(vec![("X", 2), ("Y", 2)]).unwrap();
        let lyz = SystemLayout::new(vec![("Y", 2), ("Z", 2)]).unwrap();
        let mut jxy = LabeledOperator::<f64>::zeros(lxy);
        let mut jyz = LabeledOperator::<f64>::zeros(lyz);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            jxy.set(i, j, 1.0);
            jyz.set(i, j, 1.0);
        }
        let out = jxy.link_product(&jyz).unwrap();
        let labels: Vec<&str> = out.layout().labels().collect();
        assert_eq!(labels, vec!["X", "Z"]);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((out.get(i, j) - 1.0).abs() < 1e-14);
        }
        assert!((out.get(1, 1)).abs() < 1e-14);
    }

    #[test]
    fn link_product_dim_mismatch_rejected() {
        let a = LabeledOperator::<f64>::identity(SystemLayout::new(vec![("Y", 2)]).unwrap());
        let b = LabeledOperator::<f64>::identity(SystemLayout::new(vec![("Y", 3)]).unwrap());
        assert!(matches!(
            a.link_product(&b).unwrap_err(),
            OpError::DimMismatch { .. }
        ));
    }

    #[test]
    fn permute_projectors() {
        let lx = SystemLayout::new(vec![("X", 2)]).unwrap();
        let ly = SystemLayout::new(vec![("Y", 2)]).unwrap();
        let mut p0 = LabeledOperator::<f64>::zeros(lx);
        p0.set(0, 0, 1.0);
        let mut p1 = LabeledOperator::<f64>::zeros(ly);
        p1.set(1, 1, 1.0);
        let t = p0.tensor(&p1).unwrap();
        let swapped = t.permute_systems(&["Y", "X"]).unwrap();
        let expect = p1.tensor(&p0).unwrap().permute_systems(&["Y", "X"]).unwrap();
        // |1⟩⟨1| ⊗ |0⟩⟨0| over [Y, X]
        assert_eq!(swapped.entries(), expect.entries());
        assert_eq!(*swapped.get(2, 2), 1.0);
    }

    #[test]
    fn permute_not_permutation_rejected() {
        let g = gamma();
        assert!(matches!(
            g.permute_systems(&["X", "X"]).unwrap_err(),
            OpError::NotPermutation
        ));
        assert!(matches!(
            g.permute_systems(&["X", "Z"]).unwrap_err(),
            OpError::NotPermutation
        ));
    }

    #[test]
    fn hermitian_flag_complex() {
        let layout = SystemLayout::new(vec![("X", 2)]).unwrap();
        let sy = LabeledOperator::new(
            layout,
            vec![
                Complex64::ZERO,
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
            ],
        )
        .unwrap();
        assert!(sy.is_hermitian());
        let mut bad = sy.clone();
        bad.set(0, 1, Complex64::new(0.0, 1.0));
        assert!(!bad.is_hermitian());
    }
}
