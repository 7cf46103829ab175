//! Conic interior-point backend for [`SdpProblem`] instances.
//!
//! Constraints are lowered to the solver's `Ax + s = b, s ∈ K` form:
//! equalities into the zero cone, scalar inequalities into the
//! nonnegative cone, and matrix expressions into PSD triangle cones in
//! scaled-vector (svec) layout.

use super::{Lin, PsdBlock, SdpProblem, SdpSolver, Sense, SolveStatus, SolverResult};
use crate::error::OpError;
use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

pub struct ClarabelSolver {
    /// Overrides the gap/feasibility tolerances when set.
    pub tol: Option<f64>,
    pub verbose: bool,
}

impl Default for ClarabelSolver {
    fn default() -> Self {
        ClarabelSolver {
            tol: None,
            verbose: false,
        }
    }
}

impl ClarabelSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_tol(tol: f64) -> Self {
        ClarabelSolver {
            tol: Some(tol),
            verbose: false,
        }
    }
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Drops linearly dependent equality rows via Gaussian elimination with
/// partial pivoting. Constraint sets built from projector identities
/// (like the no-signaling projection) are heavily rank-deficient, and
/// redundant zero-cone rows make the KKT system singular.
fn independent_equalities(equalities: &[Lin], num_vars: usize) -> Vec<Lin> {
    let mut dense: Vec<Vec<f64>> = equalities
        .iter()
        .map(|row| {
            let mut v = vec![0.0; num_vars + 1];
            for (var, coeff) in &row.terms {
                v[*var] = *coeff;
            }
            v[num_vars] = row.constant;
            v
        })
        .collect();
    let mut kept = Vec::new();
    let mut used = vec![false; dense.len()];
    for col in 0..num_vars {
        let pivot = (0..dense.len())
            .filter(|&r| !used[r])
            .max_by(|&a, &b| dense[a][col].abs().total_cmp(&dense[b][col].abs()));
        let Some(p) = pivot else { break };
        if dense[p][col].abs() < 1e-10 {
            continue;
        }
        used[p] = true;
        kept.push(equalities[p].clone());
        let pivot_row = dense[p].clone();
        for (r, row) in dense.iter_mut().enumerate() {
            if used[r] {
                continue;
            }
            let factor = row[col] / pivot_row[col];
            if factor != 0.0 {
                for (val, pv) in row.iter_mut().zip(&pivot_row) {
                    *val -= factor * pv;
                }
            }
        }
    }
    // Rows with no remaining coefficient support are either redundant
    // (zero constant) or witness infeasibility; keep the latter so the
    // solver reports it.
    for (r, row) in dense.iter().enumerate() {
        if !used[r] && row[num_vars].abs() > 1e-9 {
            kept.push(equalities[r].clone());
        }
    }
    kept
}

/// Appends the svec rows of a PSD block: upper-triangle entries in
/// column-major order, off-diagonal entries scaled by √2.
fn push_svec_rows(block: &PsdBlock, rows: &mut Vec<Lin>) {
    for j in 0..block.dim {
        for i in 0..=j {
            let e = block.entry(i, j).clone();
            rows.push(if i == j { e } else { e.scale_by(SQRT2) });
        }
    }
}

impl SdpSolver for ClarabelSolver {
    fn solve(&self, problem: &SdpProblem) -> Result<SolverResult, OpError> {
        let n = problem.num_scalars;

        // Row expressions in cone order; each row contributes
        // b_row - a_row'x = expression, which the cone constrains.
        let mut rows: Vec<Lin> = Vec::new();
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
        let equalities = independent_equalities(&problem.equalities, n);
        if !equalities.is_empty() {
            let count = equalities.len();
            rows.extend(equalities);
            cones.push(SupportedConeT::ZeroConeT(count));
        }
        if !problem.nonneg.is_empty() {
            rows.extend(problem.nonneg.iter().cloned());
            cones.push(SupportedConeT::NonnegativeConeT(problem.nonneg.len()));
        }
        for block in &problem.psd_blocks {
            push_svec_rows(block, &mut rows);
            cones.push(SupportedConeT::PSDTriangleConeT(block.dim));
        }

        // s = b - Ax must equal the row expression c + a'x, so the
        // matrix entry is -a and the offset is c.
        let m = rows.len();
        let mut b = vec![0.0; m];
        let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            b[r] = row.constant;
            for (var, coeff) in &row.terms {
                by_col[*var].push((r, -coeff));
            }
        }
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowval = Vec::new();
        let mut nzval = Vec::new();
        colptr.push(0);
        for col in &mut by_col {
            col.sort_by_key(|(r, _)| *r);
            for (r, v) in col.iter() {
                rowval.push(*r);
                nzval.push(*v);
            }
            colptr.push(rowval.len());
        }
        let a = CscMatrix::new(m, n, colptr, rowval, nzval);
        let p = CscMatrix::zeros((n, n));

        let mut q = vec![0.0; n];
        let obj_sign = match problem.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        for (var, coeff) in &problem.objective.terms {
            q[*var] = obj_sign * coeff;
        }

        let mut settings = DefaultSettings::default();
        settings.verbose = self.verbose;
        if let Some(tol) = self.tol {
            settings.tol_gap_abs = tol;
            settings.tol_gap_rel = tol;
            settings.tol_feas = tol;
        }

        let mut attempt = run(&p, &q, &a, &b, &cones, settings.clone())?;
        if matches!(attempt.0, SolveStatus::Failed) {
            // Ruiz equilibration occasionally stalls the interior point
            // iteration on degenerate capacity programs; a second pass
            // without it tends to converge cleanly.
            settings.equilibrate_enable = false;
            attempt = run(&p, &q, &a, &b, &cones, settings)?;
        }
        let (status, obj_val, x, solve_time) = attempt;
        Ok(SolverResult {
            status,
            objective: obj_sign * obj_val + problem.objective.constant,
            x,
            solve_ms: solve_time * 1000.0,
        })
    }
}

#[allow(clippy::type_complexity)]
fn run(
    p: &CscMatrix<f64>,
    q: &[f64],
    a: &CscMatrix<f64>,
    b: &[f64],
    cones: &[SupportedConeT<f64>],
    settings: DefaultSettings<f64>,
) -> Result<(SolveStatus, f64, Vec<f64>, f64), OpError> {
    let mut solver = DefaultSolver::new(p, q, a, b, cones, settings)
        .map_err(|e| OpError::Invalid(format!("solver setup failed: {e:?}")))?;
    solver.solve();
    let solution = &solver.solution;
    let status = match solution.status {
        SolverStatus::Solved => SolveStatus::Optimal,
        SolverStatus::AlmostSolved => SolveStatus::Inaccurate,
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            SolveStatus::Infeasible
        }
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => SolveStatus::Unbounded,
        _ => SolveStatus::Failed,
    };
    Ok((
        status,
        solution.obj_val,
        solution.x.clone(),
        solution.solve_time,
    ))
}
