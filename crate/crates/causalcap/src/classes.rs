//! Membership predicates for the supermap classes FreePar, FreeFix,
//! FreeDef, and Free, phrased as residual checks on Choi operators.
//!
//! Each checker reports every constraint it evaluated together with its
//! residual norm, so failures can be logged and inspected rather than
//! collapsed into a bare boolean.

use crate::error::OpError;
use crate::linalg::min_eigenvalue_f64;
use crate::op::{LabeledOperator, TraceReplaceTerm};
use serde::Serialize;

/// Default absolute tolerance for float-domain constraint residuals,
/// matched to interior-point solver accuracy.
pub const CLASS_TOL: f64 = 1e-8;

/// Supermap classes ordered by inclusion:
/// FreePar ⊆ FreeFix ⊆ FreeDef ⊆ Free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SupermapClass {
    FreePar,
    /// Causally fixed with an explicit slot order (permutation of 0..N).
    FreeFix(Vec<usize>),
    FreeDef,
    Free,
}

impl SupermapClass {
    pub fn name(&self) -> &'static str {
        match self {
            SupermapClass::FreePar => "FreePar",
            SupermapClass::FreeFix(_) => "FreeFix",
            SupermapClass::FreeDef => "FreeDef",
            SupermapClass::Free => "Free",
        }
    }
}

/// Role assignment for the systems of a supermap Choi operator: slot
/// input/output pairs (X_i, Y_i), the global past A, and the global
/// future B when present.
#[derive(Debug, Clone)]
pub struct SupermapRoles {
    pub slots: Vec<(String, String)>,
    pub past: String,
    pub future: Option<String>,
}

impl SupermapRoles {
    pub fn new<L: Into<String>>(
        slots: Vec<(L, L)>,
        past: L,
        future: Option<L>,
    ) -> Self {
        SupermapRoles {
            slots: slots
                .into_iter()
                .map(|(x, y)| (x.into(), y.into()))
                .collect(),
            past: past.into(),
            future: future.map(Into::into),
        }
    }

    fn validate(&self, op: &LabeledOperator<f64>) -> Result<(), OpError> {
        for (x, y) in &self.slots {
            op.layout().position(x)?;
            op.layout().position(y)?;
        }
        op.layout().position(&self.past)?;
        if let Some(b) = &self.future {
            op.layout().position(b)?;
        }
        Ok(())
    }

    fn pair_refs(&self) -> Vec<(&str, &str)> {
        self.slots
            .iter()
            .map(|(x, y)| (x.as_str(), y.as_str()))
            .collect()
    }

    /// Product of the slot output dimensions, d_Y.
    fn d_y(&self, op: &LabeledOperator<f64>) -> Result<usize, OpError> {
        let mut d = 1;
        for (_, y) in &self.slots {
            d *= op.layout().dim_of(y)?;
        }
        Ok(d)
    }

    /// Product of the slot input dimensions, d_X.
    fn d_x(&self, op: &LabeledOperator<f64>) -> Result<usize, OpError> {
        let mut d = 1;
        for (x, _) in &self.slots {
            d *= op.layout().dim_of(x)?;
        }
        Ok(d)
    }
}

/// One evaluated constraint with its residual norm.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintResidual {
    pub name: String,
    pub residual: f64,
}

/// Outcome of a class membership check.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub passed: bool,
    pub tol: f64,
    pub constraints: Vec<ConstraintResidual>,
}

impl ViolationReport {
    fn from_residuals(constraints: Vec<ConstraintResidual>, tol: f64) -> Self {
        let passed = constraints.iter().all(|c| c.residual <= tol);
        ViolationReport {
            passed,
            tol,
            constraints,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.constraints
            .iter()
            .fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

fn psd_residual(op: &LabeledOperator<f64>) -> f64 {
    (-min_eigenvalue_f64(op)).max(0.0)
}

/// Residual of ₍[1−L]₎op for a single label set L.
fn one_minus_residual(
    op: &LabeledOperator<f64>,
    labels: &[&str],
) -> Result<f64, OpError> {
    let expr = op.trace_and_replace(&[
        TraceReplaceTerm::new(1, Vec::<&str>::new()),
        TraceReplaceTerm::new(-1, labels.to_vec()),
    ])?;
    Ok(expr.max_abs())
}

fn trace_down_to(
    op: &LabeledOperator<f64>,
    keep: &[&str],
) -> Result<LabeledOperator<f64>, OpError> {
    let drop: Vec<&str> = op
        .layout()
        .labels()
        .filter(|l| !keep.contains(l))
        .collect();
    if drop.is_empty() {
        Ok(op.clone())
    } else {
        op.partial_trace(&drop)
    }
}

/// No Forward Signaling Condition: the channel with input YA and output
/// XB does not signal from A to B, i.e. ₍[1−A]₎J_{YAB} = 0.
pub fn check_no_forward_signaling(
    j: &LabeledOperator<f64>,
    roles: &SupermapRoles,
    tol: f64,
) -> Result<ViolationReport, OpError> {
    roles.validate(j)?;
    let future = roles.future.as_deref().ok_or_else(|| {
        OpError::Invalid("no forward signaling check needs a future system".into())
    })?;
    let mut keep: Vec<&str> = roles.slots.iter().map(|(_, y)| y.as_str()).collect();
    keep.push(roles.past.as_str());
    keep.push(future);
    let j_yab = trace_down_to(j, &keep)?;
    let residual = one_minus_residual(&j_yab, &[roles.past.as_str()])?;
    Ok(ViolationReport::from_residuals(
        vec![ConstraintResidual {
            name: "[1-A] J_YAB = 0".into(),
            residual,
        }],
        tol,
    ))
}

/// General supermap membership: J ≥ 0 and ℒ^NS_XY(J_XYA) = 1/d_X.
pub fn check_general_supermap(
    j: &LabeledOperator<f64>,
    roles: &SupermapRoles,
    tol: f64,
) -> Result<ViolationReport, OpError> {
    roles.validate(j)?;
    let mut constraints = vec![ConstraintResidual {
        name: "J >= 0".into(),
        residual: psd_residual(j),
    }];
    let j_xya = match &roles.future {
        Some(b) => j.partial_trace(&[b.as_str()])?,
        None => j.clone(),
    };
    let projected = j_xya.ns_project(&roles.pair_refs())?;
    let d_x = roles.d_x(j)? as f64;
    let target = LabeledOperator::identity(projected.layout().clone()).scale(1.0 / d_x);
    constraints.push(ConstraintResidual {
        name: "L^NS(J_XYA) = 1/d_X".into(),
        residual: projected.max_abs_diff(&target)?,
    });
    Ok(ViolationReport::from_residuals(constraints, tol))
}

/// Telescoping constraints of a quantum comb in the given slot order,
/// plus positivity and the normalization J_A = d_Y 1_A.
pub fn check_comb(
    j: &LabeledOperator<f64>,
    roles: &SupermapRoles,
    order: &[usize],
    tol: f64,
) -> Result<ViolationReport, OpError> {
    roles.validate(j)?;
    validate_order(order, roles.slots.len())?;
    let mut constraints = vec![ConstraintResidual {
        name: "J >= 0".into(),
        residual: psd_residual(j),
    }];
    constraints.extend(telescoping_residuals(j, roles, order, order.len())?);
    let j_a = trace_down_to(j, &[roles.past.as_str()])?;
    let d_y = roles.d_y(j)? as f64;
    let target = LabeledOperator::identity(j_a.layout().clone()).scale(d_y);
    constraints.push(ConstraintResidual {
        name: "J_A = d_Y 1_A".into(),
        residual: j_a.max_abs_diff(&target)?,
    });
    Ok(ViolationReport::from_residuals(constraints, tol))
}

fn validate_order(order: &[usize], n: usize) -> Result<(), OpError> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(OpError::Invalid(format!(
            "order covers {} of {} slots",
            order.len(),
            n
        )));
    }
    for &k in order {
        if k >= n || seen[k] {
            return Err(OpError::Invalid(format!("invalid slot order {order:?}")));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Residuals of ₍[1−Y_{k_n}]₎J_{X_{k_1}Y_{k_1}…X_{k_n}Y_{k_n}A} = 0 for
/// n = 1..=depth along the given order.
fn telescoping_residuals(
    j: &LabeledOperator<f64>,
    roles: &SupermapRoles,
    order: &[usize],
    depth: usize,
) -> Result<Vec<ConstraintResidual>, OpError> {
    let mut out = Vec::new();
    for n in 1..=depth {
        let mut keep: Vec<&str> = Vec::new();
        for &k in &order[..n] {
            keep.push(roles.slots[k].0.as_str());
            keep.push(roles.slots[k].1.as_str());
        }
        keep.push(roles.past.as_str());
        let reduced = trace_down_to(j, &keep)?;
        let y_n = roles.slots[order[n - 1]].1.as_str();
        out.push(ConstraintResidual {
            name: format!("[1-Y{}] prefix n={} = 0", order[n - 1] + 1, n),
            residual: one_minus_residual(&reduced, &[y_n])?,
        });
    }
    Ok(out)
}

/// Validates an explicit causally definite decomposition
/// J = Σ J^{(k_1,…,k_N)} against the per-order constraints and the joint
/// normalization Σ J^{(…)}_A = d_Y 1_A.
pub fn check_definite_decomposition(
    components: &[(Vec<usize>, LabeledOperator<f64>)],
    roles: &SupermapRoles,
    tol: f64,
) -> Result<ViolationReport, OpError> {
    if components.is_empty() {
        return Err(OpError::Invalid("empty decomposition".into()));
    }
    let n = roles.slots.len();
    for (order, op) in components {
        validate_order(order, n)?;
        roles.validate(op)?;
    }
    let mut constraints = Vec::new();
    for (order, op) in components {
        constraints.push(ConstraintResidual {
            name: format!("J^({order:?}) >= 0"),
            residual: psd_residual(op),
        });
        // Last-slot telescoping applies to each component on its own.
        constraints.extend(telescoping_residuals(op, roles, order, n)?.split_off(n - 1));
    }
    // Prefix constraints at depth n < N apply to the sum of every
    // component sharing the prefix.
    for depth in 1..n {
        let mut by_prefix: Vec<(&[usize], LabeledOperator<f64>)> = Vec::new();
        for (order, op) in components {
            let prefix = &order[..depth];
            match by_prefix.iter_mut().find(|(p, _)| *p == prefix) {
                Some((_, acc)) => *acc = acc.add(op)?,
                None => by_prefix.push((prefix, op.clone())),
            }
        }
        for (prefix, sum) in by_prefix {
            let mut order: Vec<usize> = prefix.to_vec();
            for k in 0..n {
                if !order.contains(&k) {
                    order.push(k);
                }
            }
            let res = telescoping_residuals(&sum, roles, &order, depth)?;
            constraints.push(ConstraintResidual {
                name: format!("[1-Y{}] prefix {:?} sum = 0", prefix[depth - 1] + 1, prefix),
                residual: res[depth - 1].residual,
            });
        }
    }
    let mut total_a: Option<LabeledOperator<f64>> = None;
    for (_, op) in components {
        let a = trace_down_to(op, &[roles.past.as_str()])?;
        total_a = Some(match total_a {
            Some(t) => t.add(&a)?,
            None => a,
        });
    }
    let total_a = total_a.expect("nonempty");
    let d_y = roles.d_y(&components[0].1)? as f64;
    let target = LabeledOperator::identity(total_a.layout().clone()).scale(d_y);
    constraints.push(ConstraintResidual {
        name: "sum J_A = d_Y 1_A".into(),
        residual: total_a.max_abs_diff(&target)?,
    });
    Ok(ViolationReport::from_residuals(constraints, tol))
}

/// No-signaling multipartite channel: ₍[Y_j − X_jY_j]₎J = 0 for all j.
pub fn check_no_signaling_channel(
    j: &LabeledOperator<f64>,
    pairs: &[(&str, &str)],
    tol: f64,
) -> Result<ViolationReport, OpError> {
    let mut constraints = Vec::new();
    for (x, y) in pairs {
        let expr = j.trace_and_replace(&[
            TraceReplaceTerm::new(1, vec![*y]),
            TraceReplaceTerm::new(-1, vec![*x, *y]),
        ])?;
        constraints.push(ConstraintResidual {
            name: format!("[{y}-{x}{y}] J = 0"),
            residual: expr.max_abs(),
        });
    }
    Ok(ViolationReport::from_residuals(constraints, tol))
}
