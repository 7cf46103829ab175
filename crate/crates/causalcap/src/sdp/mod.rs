//! Solver-agnostic SDP modeling: symmetric matrix variables, affine
//! equality and cone constraints, a solver adapter contract, and the
//! capacity extraction rule.

pub mod clarabel;
pub mod lin;
pub mod programs;
pub mod sdpa;
pub mod twirl;

pub use lin::Lin;

use crate::error::OpError;
use crate::layout::SystemLayout;
use crate::op::LabeledOperator;
use serde::Serialize;

/// Optimization sense of the scalar objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A matrix expression required to be positive semidefinite, stored
/// row-major with symmetric entries.
#[derive(Debug, Clone)]
pub struct PsdBlock {
    pub dim: usize,
    pub entries: Vec<Lin>,
}

impl PsdBlock {
    pub fn entry(&self, i: usize, j: usize) -> &Lin {
        &self.entries[i * self.dim + j]
    }
}

#[derive(Debug, Clone)]
enum VarKind {
    /// Symmetric matrix variable; scalar variables are allocated for the
    /// upper triangle (i ≤ j) in row-major order starting at `base`.
    Matrix { layout: SystemLayout, base: usize },
    Scalar { index: usize },
}

#[derive(Debug, Clone)]
struct VarInfo {
    name: String,
    kind: VarKind,
}

/// A fully assembled semidefinite program.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub num_scalars: usize,
    pub sense: Sense,
    pub objective: Lin,
    /// Affine expressions constrained to equal zero.
    pub equalities: Vec<Lin>,
    /// Affine expressions constrained to be nonnegative.
    pub nonneg: Vec<Lin>,
    pub psd_blocks: Vec<PsdBlock>,
    vars: Vec<VarInfo>,
}

impl SdpProblem {
    /// Reconstructs the value of a named matrix variable from a solver
    /// assignment of the scalar variables.
    pub fn matrix_value(
        &self,
        name: &str,
        x: &[f64],
    ) -> Result<LabeledOperator<f64>, OpError> {
        let info = self
            .vars
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| OpError::Invalid(format!("unknown variable {name}")))?;
        match &info.kind {
            VarKind::Matrix { layout, base } => {
                let d = layout.total_dim();
                Ok(LabeledOperator::from_fn(layout.clone(), |i, j| {
                    let (r, c) = if i <= j { (i, j) } else { (j, i) };
                    x[base + tri_index(d, r, c)]
                }))
            }
            VarKind::Scalar { .. } => {
                Err(OpError::Invalid(format!("{name} is a scalar variable")))
            }
        }
    }

    pub fn scalar_value(&self, name: &str, x: &[f64]) -> Result<f64, OpError> {
        let info = self
            .vars
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| OpError::Invalid(format!("unknown variable {name}")))?;
        match &info.kind {
            VarKind::Scalar { index } => Ok(x[*index]),
            VarKind::Matrix { .. } => {
                Err(OpError::Invalid(format!("{name} is a matrix variable")))
            }
        }
    }
}

/// Index of the upper-triangle entry (i, j), i ≤ j, in row-major order.
fn tri_index(d: usize, i: usize, j: usize) -> usize {
    i * d - i * (i + 1) / 2 + j
}

/// Incremental constructor for [`SdpProblem`].
#[derive(Debug, Default)]
pub struct SdpBuilder {
    num_scalars: usize,
    vars: Vec<VarInfo>,
    equalities: Vec<Lin>,
    nonneg: Vec<Lin>,
    psd_blocks: Vec<PsdBlock>,
    objective: Option<(Sense, Lin)>,
}

impl SdpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a symmetric matrix variable over the given layout and
    /// returns it as an operator of affine entries.
    pub fn sym_var(&mut self, name: &str, layout: SystemLayout) -> LabeledOperator<Lin> {
        let d = layout.total_dim();
        let base = self.num_scalars;
        self.num_scalars += d * (d + 1) / 2;
        self.vars.push(VarInfo {
            name: name.to_string(),
            kind: VarKind::Matrix {
                layout: layout.clone(),
                base,
            },
        });
        LabeledOperator::from_fn(layout, |i, j| {
            let (r, c) = if i <= j { (i, j) } else { (j, i) };
            Lin::var(base + tri_index(d, r, c))
        })
    }

    pub fn scalar_var(&mut self, name: &str) -> Lin {
        let index = self.num_scalars;
        self.num_scalars += 1;
        self.vars.push(VarInfo {
            name: name.to_string(),
            kind: VarKind::Scalar { index },
        });
        Lin::var(index)
    }

    /// Constrains every entry of the operator expression to zero. Only
    /// the upper triangle is emitted; expressions are symmetric by
    /// construction.
    pub fn require_eq_zero(&mut self, op: &LabeledOperator<Lin>) {
        let d = op.dim();
        for i in 0..d {
            for j in i..d {
                let e = op.get(i, j).clone();
                if !crate::scalar::Scalar::is_zero(&e) {
                    self.equalities.push(e);
                }
            }
        }
    }

    pub fn require_scalar_eq_zero(&mut self, e: Lin) {
        self.equalities.push(e);
    }

    pub fn require_psd(&mut self, op: &LabeledOperator<Lin>) {
        self.psd_blocks.push(PsdBlock {
            dim: op.dim(),
            entries: op.entries().to_vec(),
        });
    }

    pub fn require_nonneg(&mut self, e: Lin) {
        self.nonneg.push(e);
    }

    pub fn maximize(&mut self, e: Lin) {
        self.objective = Some((Sense::Maximize, e));
    }

    pub fn minimize(&mut self, e: Lin) {
        self.objective = Some((Sense::Minimize, e));
    }

    pub fn finish(self) -> SdpProblem {
        let (sense, objective) = self
            .objective
            .expect("objective must be set before finishing the problem");
        SdpProblem {
            num_scalars: self.num_scalars,
            sense,
            objective,
            equalities: self.equalities,
            nonneg: self.nonneg,
            psd_blocks: self.psd_blocks,
            vars: self.vars,
        }
    }
}

/// Converts a numeric operator into constant affine entries.
pub fn lin_const(op: &LabeledOperator<f64>) -> LabeledOperator<Lin> {
    op.map(|v| Lin::constant(*v))
}

/// tr[E · Jᵀ] for an affine E and a numeric symmetric J, the link product
/// when every system is shared. J is permuted to E's system order first.
pub fn pair_with(
    e: &LabeledOperator<Lin>,
    j: &LabeledOperator<f64>,
) -> Result<Lin, OpError> {
    let order: Vec<&str> = e.layout().labels().collect();
    let j = j.permute_systems(&order)?;
    let d = e.dim();
    let mut acc = Lin::constant(0.0);
    for r in 0..d {
        for c in 0..d {
            let w = *j.get(r, c);
            if w != 0.0 {
                acc = acc + e.get(r, c).clone().scale_by(w);
            }
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Inaccurate,
    Failed,
}

/// Outcome of a solver run. Variable matrices are recovered on demand
/// through [`SdpProblem::matrix_value`] using the `x` assignment.
#[derive(Debug, Clone)]
pub struct SolverResult {
    pub status: SolveStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub solve_ms: f64,
}

/// Solver adapter contract: any conic solver able to handle affine
/// equalities, scalar nonnegativity, and PSD blocks.
pub trait SdpSolver {
    fn solve(&self, problem: &SdpProblem) -> Result<SolverResult, OpError>;
}

pub const CAPACITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct CapacityResult {
    pub m_star: f64,
    pub capacity_bits: f64,
    pub class: String,
    pub eps: f64,
}

/// Applies the floor relaxation: capacity = log2 ⌊m* + slack⌋.
pub fn capacity_from(
    m_star: f64,
    slack: f64,
    class: &str,
    eps: f64,
) -> Result<CapacityResult, OpError> {
    let floored = (m_star + slack).floor();
    if floored < 1.0 {
        return Err(OpError::Invalid(format!(
            "capacity undefined: floor(m* + slack) = {floored} < 1"
        )));
    }
    Ok(CapacityResult {
        m_star,
        capacity_bits: floored.log2(),
        class: class.to_string(),
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit(label: &str) -> SystemLayout {
        SystemLayout::new(vec![(label, 2usize)]).unwrap()
    }

    #[test]
    fn sym_var_is_symmetric() {
        let mut b = SdpBuilder::new();
        let v = b.sym_var("V", qubit("X"));
        assert_eq!(v.get(0, 1), v.get(1, 0));
        assert_ne!(v.get(0, 0), v.get(1, 1));
        assert_eq!(b.num_scalars, 3);
    }

    #[test]
    fn matrix_value_round_trip() {
        let mut b = SdpBuilder::new();
        let _v = b.sym_var("V", qubit("X"));
        b.maximize(Lin::constant(0.0));
        let p = b.finish();
        let x = vec![1.0, 2.0, 3.0];
        let m = p.matrix_value("V", &x).unwrap();
        assert_eq!(*m.get(0, 0), 1.0);
        assert_eq!(*m.get(0, 1), 2.0);
        assert_eq!(*m.get(1, 0), 2.0);
        assert_eq!(*m.get(1, 1), 3.0);
    }

    #[test]
    fn pair_with_is_trace_of_product_transpose() {
        let mut b = SdpBuilder::new();
        let v = b.sym_var("V", qubit("X"));
        let j = LabeledOperator::new(qubit("X"), vec![1.0, 2.0, 2.0, 5.0]).unwrap();
        let e = pair_with(&v, &j).unwrap();
        // tr[V Jᵀ] = v00·1 + 2·v01·2 + v11·5
        let x = vec![1.0, 1.0, 1.0];
        assert_eq!(e.eval(&x), 1.0 + 4.0 + 5.0);
    }

    #[test]
    fn capacity_floor_slack() {
        let r = capacity_from(3.9999997, 1e-6, "Free", 0.0).unwrap();
        assert_eq!(r.capacity_bits, 2.0);
        let r = capacity_from(3.999, 1e-6, "Free", 0.0).unwrap();
        assert_eq!(r.capacity_bits, f64::log2(3.0));
        assert!(capacity_from(0.5, 1e-6, "Free", 0.0).is_err());
    }

    #[test]
    fn trace_and_replace_on_affine_entries() {
        // The tensor core must work unchanged over Lin scalars.
        let mut b = SdpBuilder::new();
        let v = b.sym_var("V", qubit("X").concat(&qubit("Y")).unwrap());
        let reduced = v.partial_trace(&["X"]).unwrap();
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        // tr_X picks entries (0,0)+(2,2) for position (0,0) of the result.
        let v00 = v.get(0, 0).eval(&x) + v.get(2, 2).eval(&x);
        assert_eq!(reduced.get(0, 0).eval(&x), v00);
    }
}
