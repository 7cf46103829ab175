//! SDP constructions for every optimization program used in the
//! experiments: the capacity programs of the four supermap classes, the
//! zero-error duals, the parallel simulation cost, and the two routes to
//! the minimum average error probability.

use super::{lin_const, pair_with, Lin, SdpBuilder, SdpProblem};
use crate::channels::{ChannelList, ChoiChannel};
use crate::error::OpError;
use crate::op::{LabeledOperator, TraceReplaceTerm};
use crate::scalar::Scalar;

/// Shared data extracted from a channel list once per program build.
struct Instance {
    jc: LabeledOperator<f64>,
    pairs: Vec<(String, String)>,
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    d_x: usize,
    d_y: usize,
}

impl Instance {
    fn new(list: &ChannelList) -> Result<Self, OpError> {
        let jc = list
            .combine_real()
            .map_err(|e| OpError::Invalid(e.to_string()))?;
        let pairs = list.slot_pairs();
        let x_labels: Vec<String> = pairs.iter().map(|(x, _)| x.clone()).collect();
        let y_labels: Vec<String> = pairs.iter().map(|(_, y)| y.clone()).collect();
        let mut d_x = 1;
        let mut d_y = 1;
        for x in &x_labels {
            d_x *= jc.layout().dim_of(x)?;
        }
        for y in &y_labels {
            d_y *= jc.layout().dim_of(y)?;
        }
        Ok(Instance {
            jc,
            pairs,
            x_labels,
            y_labels,
            d_x,
            d_y,
        })
    }

    fn pair_refs(&self) -> Vec<(&str, &str)> {
        self.pairs
            .iter()
            .map(|(x, y)| (x.as_str(), y.as_str()))
            .collect()
    }

    fn x_refs(&self) -> Vec<&str> {
        self.x_labels.iter().map(String::as_str).collect()
    }

    fn xy_layout(&self) -> crate::layout::SystemLayout {
        self.jc.layout().clone()
    }
}

fn check_eps(eps: f64) -> Result<(), OpError> {
    if !(0.0..1.0).contains(&eps) {
        return Err(OpError::Invalid(format!(
            "error tolerance must satisfy 0 <= eps < 1, got {eps}"
        )));
    }
    Ok(())
}

/// Constrains the reduced operator over the X systems to the identity:
/// E_Y = 1_Y.
fn require_reduced_identity(
    b: &mut SdpBuilder,
    e: &LabeledOperator<Lin>,
    x_labels: &[&str],
) -> Result<(), OpError> {
    let e_y = e.partial_trace(x_labels)?;
    let id = LabeledOperator::<Lin>::identity(e_y.layout().clone());
    b.require_eq_zero(&e_y.sub(&id)?);
    Ok(())
}

/// ₍[1−L]₎op as an affine operator expression.
fn one_minus<L: AsRef<str>>(
    op: &LabeledOperator<Lin>,
    labels: &[L],
) -> Result<LabeledOperator<Lin>, OpError> {
    op.trace_and_replace(&[
        TraceReplaceTerm::new(1, Vec::<&str>::new()),
        TraceReplaceTerm::new(-1, labels.iter().map(|l| l.as_ref()).collect()),
    ])
}

/// Capacity assisted by free general supermaps:
/// max m s.t. E ⋆ J ≥ m(1−ε), E_Y = 1_Y, 0 ≤ E ≤ F,
/// ℒ^NS(F) = (m/d_X)·1.
pub fn build_capacity_free(list: &ChannelList, eps: f64) -> Result<SdpProblem, OpError> {
    check_eps(eps)?;
    let inst = Instance::new(list)?;
    let mut b = SdpBuilder::new();
    let m = b.scalar_var("m");
    let e = b.sym_var("E", inst.xy_layout());
    let f = b.sym_var("F", inst.xy_layout());

    b.require_nonneg(pair_with(&e, &inst.jc)? - m.clone().scale_by(1.0 - eps));
    require_reduced_identity(&mut b, &e, &inst.x_refs())?;
    b.require_psd(&e);
    b.require_psd(&f.sub(&e)?);
    let projected = f.ns_project(&inst.pair_refs())?;
    let target = LabeledOperator::<Lin>::identity(inst.xy_layout())
        .scale(m.clone().scale_by(1.0 / inst.d_x as f64));
    b.require_eq_zero(&projected.sub(&target)?);

    b.maximize(m);
    Ok(b.finish())
}

/// Capacity assisted by free causally definite supermaps, two slots:
/// max m s.t. (E+G) ⋆ J ≥ m(1−ε), E_Y + G_Y = 1_Y, 0 ≤ E ≤ F,
/// 0 ≤ G ≤ H, tr[F+H] = m·d_Y, plus the four telescoping constraints.
pub fn build_capacity_freedef2(list: &ChannelList, eps: f64) -> Result<SdpProblem, OpError> {
    check_eps(eps)?;
    let inst = Instance::new(list)?;
    if inst.pairs.len() != 2 {
        return Err(OpError::Invalid(
            "the FreeDef capacity program is implemented for exactly two slots".into(),
        ));
    }
    let mut b = SdpBuilder::new();
    let m = b.scalar_var("m");
    let e = b.sym_var("E", inst.xy_layout());
    let f = b.sym_var("F", inst.xy_layout());
    let g = b.sym_var("G", inst.xy_layout());
    let h = b.sym_var("H", inst.xy_layout());

    let eg = e.add(&g)?;
    b.require_nonneg(pair_with(&eg, &inst.jc)? - m.clone().scale_by(1.0 - eps));
    require_reduced_identity(&mut b, &eg, &inst.x_refs())?;
    b.require_psd(&e);
    b.require_psd(&f.sub(&e)?);
    b.require_psd(&g);
    b.require_psd(&h.sub(&g)?);
    b.require_scalar_eq_zero(
        f.trace() + h.trace() - m.clone().scale_by(inst.d_y as f64),
    );
    push_comb_marginal_constraints(&mut b, &f, &inst, 0)?;
    push_comb_marginal_constraints(&mut b, &h, &inst, 1)?;

    b.maximize(m);
    Ok(b.finish())
}

/// For the order starting at slot `first` (two slots): ₍[1−Y_last]₎F = 0
/// and ₍[1−Y_first]₎F_{X_first Y_first} = 0.
fn push_comb_marginal_constraints(
    b: &mut SdpBuilder,
    f: &LabeledOperator<Lin>,
    inst: &Instance,
    first: usize,
) -> Result<(), OpError> {
    let last = 1 - first;
    b.require_eq_zero(&one_minus(f, &[inst.y_labels[last].as_str()])?);
    let keep_x = inst.x_labels[first].as_str();
    let keep_y = inst.y_labels[first].as_str();
    let drop: Vec<&str> = f
        .layout()
        .labels()
        .filter(|l| *l != keep_x && *l != keep_y)
        .collect();
    let reduced = f.partial_trace(&drop)?;
    b.require_eq_zero(&one_minus(&reduced, &[keep_y])?);
    Ok(())
}

/// Capacity assisted by free causally fixed supermaps with the given
/// slot order (two slots). This is the FreeDef program restricted to a
/// single order component (G = H = 0); the paper does not state it
/// separately.
pub fn build_capacity_freefix2(
    list: &ChannelList,
    eps: f64,
    order: (usize, usize),
) -> Result<SdpProblem, OpError> {
    check_eps(eps)?;
    let inst = Instance::new(list)?;
    if inst.pairs.len() != 2 {
        return Err(OpError::Invalid(
            "the FreeFix capacity program is implemented for exactly two slots".into(),
        ));
    }
    if !matches!(order, (0, 1) | (1, 0)) {
        return Err(OpError::Invalid(format!("invalid slot order {order:?}")));
    }
    let mut b = SdpBuilder::new();
    let m = b.scalar_var("m");
    let e = b.sym_var("E", inst.xy_layout());
    let f = b.sym_var("F", inst.xy_layout());

    b.require_nonneg(pair_with(&e, &inst.jc)? - m.clone().scale_by(1.0 - eps));
    require_reduced_identity(&mut b, &e, &inst.x_refs())?;
    b.require_psd(&e);
    b.require_psd(&f.sub(&e)?);
    b.require_scalar_eq_zero(f.trace() - m.clone().scale_by(inst.d_y as f64));
    push_comb_marginal_constraints(&mut b, &f, &inst, order.0)?;

    b.maximize(m);
    Ok(b.finish())
}

/// Capacity assisted by free parallel supermaps:
/// max m s.t. E ⋆ J ≥ m(1−ε), E_Y = 1_Y, 0 ≤ E ≤ F_X ⊗ 1_Y,
/// tr[F_X] = m.
pub fn build_capacity_freepar(list: &ChannelList, eps: f64) -> Result<SdpProblem, OpError> {
    check_eps(eps)?;
    let inst = Instance::new(list)?;
    let mut b = SdpBuilder::new();
    let m = b.scalar_var("m");
    let e = b.sym_var("E", inst.xy_layout());
    let x_positions = inst.jc.layout().positions(&inst.x_refs())?;
    let x_layout = inst.jc.layout().select(&x_positions);
    let y_positions = inst
        .jc
        .layout()
        .positions(&inst.y_labels.iter().map(String::as_str).collect::<Vec<_>>())?;
    let y_layout = inst.jc.layout().select(&y_positions);
    let fx = b.sym_var("F", x_layout);

    b.require_nonneg(pair_with(&e, &inst.jc)? - m.clone().scale_by(1.0 - eps));
    require_reduced_identity(&mut b, &e, &inst.x_refs())?;
    b.require_psd(&e);
    let fx_full = fx.tensor(&LabeledOperator::<Lin>::identity(y_layout))?;
    b.require_psd(&fx_full.sub(&e)?);
    b.require_scalar_eq_zero(fx.trace() - m.clone());

    b.maximize(m);
    Ok(b.finish())
}

/// Dual of the zero-error Free capacity program:
/// min tr[N_Y] s.t. ℒ^NS(M) ≥ 0,
/// ℒ^NS(M) + 1_X ⊗ N_Y ≥ (1 + tr[M]/d_X)·J.
pub fn build_zero_error_dual_free(list: &ChannelList) -> Result<SdpProblem, OpError> {
    let inst = Instance::new(list)?;
    let mut b = SdpBuilder::new();
    let m = b.sym_var("M", inst.xy_layout());
    let y_positions = inst
        .jc
        .layout()
        .positions(&inst.y_labels.iter().map(String::as_str).collect::<Vec<_>>())?;
    let y_layout = inst.jc.layout().select(&y_positions);
    let x_positions = inst.jc.layout().positions(&inst.x_refs())?;
    let x_layout = inst.jc.layout().select(&x_positions);
    let n = b.sym_var("N", y_layout);

    let projected = m.ns_project(&inst.pair_refs())?;
    b.require_psd(&projected);
    let n_full = LabeledOperator::<Lin>::identity(x_layout)
        .tensor(&n)?
        .permute_systems(&inst.jc.layout().labels().collect::<Vec<_>>())?;
    let scale = Lin::one() + m.trace().scale_by(1.0 / inst.d_x as f64);
    let rhs = lin_const(&inst.jc).scale(scale);
    b.require_psd(&projected.add(&n_full)?.sub(&rhs)?);

    b.minimize(n.trace());
    Ok(b.finish())
}

/// Dual of the zero-error FreeDef capacity program for two slots:
/// min tr[K_Y] over λ, M, N, K with the per-order marginal and
/// normalization constraints and the two operator inequalities.
pub fn build_zero_error_dual_freedef2(list: &ChannelList) -> Result<SdpProblem, OpError> {
    let inst = Instance::new(list)?;
    if inst.pairs.len() != 2 {
        return Err(OpError::Invalid(
            "the FreeDef dual is implemented for exactly two slots".into(),
        ));
    }
    let mut b = SdpBuilder::new();
    let lambda = b.scalar_var("lambda");
    let m = b.sym_var("M", inst.xy_layout());
    let n = b.sym_var("N", inst.xy_layout());
    let y_positions = inst
        .jc
        .layout()
        .positions(&inst.y_labels.iter().map(String::as_str).collect::<Vec<_>>())?;
    let y_layout = inst.jc.layout().select(&y_positions);
    let x_positions = inst.jc.layout().positions(&inst.x_refs())?;
    let x_layout = inst.jc.layout().select(&x_positions);
    let k = b.sym_var("K", y_layout);

    let k_full = LabeledOperator::<Lin>::identity(x_layout)
        .tensor(&k)?
        .permute_systems(&inst.jc.layout().labels().collect::<Vec<_>>())?;
    let rhs = lin_const(&inst.jc).scale(lambda.clone() + Lin::one());

    // M blocks the order (1,2): no signaling from X2 once Y2 is traced
    // out, and the X1 marginal fixes the normalization d_{X2}·λ.
    push_dual_order_constraints(&mut b, &m, &inst, 0, &lambda)?;
    b.require_psd(&m.add(&k_full)?.sub(&rhs)?);
    // N mirrors the order (2,1).
    push_dual_order_constraints(&mut b, &n, &inst, 1, &lambda)?;
    b.require_psd(&n.add(&k_full)?.sub(&rhs)?);

    b.minimize(k.trace());
    Ok(b.finish())
}

/// For `first` the slot measured first: M ≥ 0,
/// ₍[1−X_last]₎M_{X Y_first} = 0, M_{X_first} = d_{X_last}·λ·1.
fn push_dual_order_constraints(
    b: &mut SdpBuilder,
    m: &LabeledOperator<Lin>,
    inst: &Instance,
    first: usize,
    lambda: &Lin,
) -> Result<(), OpError> {
    let last = 1 - first;
    b.require_psd(m);
    let reduced = m.partial_trace(&[inst.y_labels[last].as_str()])?;
    b.require_eq_zero(&one_minus(&reduced, &[inst.x_labels[last].as_str()])?);
    let drop: Vec<&str> = m
        .layout()
        .labels()
        .filter(|l| *l != inst.x_labels[first].as_str())
        .collect();
    let marginal = m.partial_trace(&drop)?;
    let d_last = inst.jc.layout().dim_of(&inst.x_labels[last])? as f64;
    let target = LabeledOperator::<Lin>::identity(marginal.layout().clone())
        .scale(lambda.clone().scale_by(d_last));
    b.require_eq_zero(&marginal.sub(&target)?);
    Ok(())
}

/// Parallel simulation cost of a single channel:
/// min tr[F_B] s.t. Y ≥ 0, Y ≥ E − J^C, Y_A ≤ ε·1_A,
/// 0 ≤ E ≤ 1_A ⊗ F_B, E_A = 1_A.
pub fn build_sim_cost_par(channel: &ChoiChannel, eps: f64) -> Result<SdpProblem, OpError> {
    if eps < 0.0 {
        return Err(OpError::Invalid("eps must be nonnegative".into()));
    }
    if channel.input_labels().len() != 1 || channel.output_labels().len() != 1 {
        return Err(OpError::Invalid(
            "simulation cost takes a single-system channel".into(),
        ));
    }
    let jc = channel
        .real_op()
        .map_err(|e| OpError::Invalid(format!("channel has complex entries: {e}")))?;
    let a = channel.input_labels()[0].as_str();
    let bl = channel.output_labels()[0].as_str();
    let layout_ab = jc.layout().clone();
    let a_layout = layout_ab.select(&layout_ab.positions(&[a])?);
    let b_layout = layout_ab.select(&layout_ab.positions(&[bl])?);

    let mut b = SdpBuilder::new();
    let y = b.sym_var("Y", layout_ab.clone());
    let e = b.sym_var("E", layout_ab.clone());
    let fb = b.sym_var("F", b_layout);

    b.require_psd(&y);
    b.require_psd(&y.sub(&e)?.add(&lin_const(&jc))?);
    let y_a = y.partial_trace(&[bl])?;
    let eps_id = LabeledOperator::<Lin>::identity(a_layout.clone()).scale(Lin::constant(eps));
    b.require_psd(&eps_id.sub(&y_a)?);
    b.require_psd(&e);
    let fb_full = LabeledOperator::<Lin>::identity(a_layout)
        .tensor(&fb)?
        .permute_systems(&layout_ab.labels().collect::<Vec<_>>())?;
    b.require_psd(&fb_full.sub(&e)?);
    let e_a = e.partial_trace(&[bl])?;
    let id_a = LabeledOperator::<Lin>::identity(e_a.layout().clone());
    b.require_eq_zero(&e_a.sub(&id_a)?);

    b.minimize(fb.trace());
    Ok(b.finish())
}

/// Adds the FreePar membership constraints on the reduced pair (E, F)
/// of the block form E ⊗ J^Δ + F ⊗ (1 − J^Δ): positivity,
/// ₍[1−Y]₎(E + (m−1)F) = 0, tr[E + (m−1)F] = d_Y, and the forward
/// no-signaling condition E_Y = F_Y.
fn push_freepar_membership(
    b: &mut SdpBuilder,
    e: &LabeledOperator<Lin>,
    f: &LabeledOperator<Lin>,
    inst: &Instance,
    m: usize,
) -> Result<(), OpError> {
    b.require_psd(e);
    b.require_psd(f);
    let combo = e.add(&f.scale(Lin::constant((m - 1) as f64)))?;
    b.require_eq_zero(&one_minus(&combo, &inst.y_labels)?);
    b.require_scalar_eq_zero(combo.trace() - Lin::constant(inst.d_y as f64));
    let e_y = e.partial_trace(&inst.x_refs())?;
    let f_y = f.partial_trace(&inst.x_refs())?;
    b.require_eq_zero(&e_y.sub(&f_y)?);
    Ok(())
}

/// Minimum average error probability over FreePar supermaps:
/// min 1 − E ⋆ J over the block-form membership constraints.
pub fn build_avg_error_freepar(list: &ChannelList, m: usize) -> Result<SdpProblem, OpError> {
    if m < 2 {
        return Err(OpError::Invalid(
            "average error needs m >= 2; m = 1 makes the task trivial".into(),
        ));
    }
    let inst = Instance::new(list)?;
    let mut b = SdpBuilder::new();
    let e = b.sym_var("E", inst.xy_layout());
    let f = b.sym_var("F", inst.xy_layout());
    push_freepar_membership(&mut b, &e, &f, &inst, m)?;
    b.minimize(Lin::one() - pair_with(&e, &inst.jc)?);
    Ok(b.finish())
}

/// The same quantity through the diamond-distance route:
/// min ε s.t. Y ≥ J^ℳ − J^Δ, Y ≥ 0, Y_A ≤ ε·1_A with
/// J^ℳ = (E ⋆ J)·J^Δ + (F ⋆ J)·(1 − J^Δ), same membership constraints.
pub fn build_omega_freepar(list: &ChannelList, m: usize) -> Result<SdpProblem, OpError> {
    if m < 2 {
        return Err(OpError::Invalid(
            "omega needs m >= 2; m = 1 makes the task trivial".into(),
        ));
    }
    let inst = Instance::new(list)?;
    let mut b = SdpBuilder::new();
    let e = b.sym_var("E", inst.xy_layout());
    let f = b.sym_var("F", inst.xy_layout());
    push_freepar_membership(&mut b, &e, &f, &inst, m)?;

    let ab_layout =
        crate::layout::SystemLayout::new(vec![("A".to_string(), m), ("B".to_string(), m)])?;
    let y = b.sym_var("Ydiam", ab_layout.clone());
    let epsv = b.scalar_var("eps");

    // J^Δ on AB and its complement.
    let jdelta = LabeledOperator::from_fn(ab_layout.clone(), |r, c| {
        let dr = ab_layout.decompose(r);
        let dc = ab_layout.decompose(c);
        if dr[0] == dr[1] && dc[0] == dc[1] && r == c {
            1.0
        } else {
            0.0
        }
    });
    let id_ab = LabeledOperator::<f64>::identity(ab_layout.clone());
    let complement = id_ab.sub(&jdelta)?;

    let pe = pair_with(&e, &inst.jc)?;
    let pf = pair_with(&f, &inst.jc)?;
    let diff = lin_const(&jdelta)
        .scale(pe - Lin::one())
        .add(&lin_const(&complement).scale(pf))?;
    b.require_psd(&y.sub(&diff)?);
    b.require_psd(&y);
    let y_a = y.partial_trace(&["B"])?;
    let a_layout = ab_layout.select(&[0]);
    let eps_id = LabeledOperator::<Lin>::identity(a_layout).scale(epsv.clone());
    b.require_psd(&eps_id.sub(&y_a)?);

    b.minimize(epsv);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        amplitude_damping, classical_noiseless, pauli_channel, replacement_channel, ChannelList,
    };
    use crate::sdp::clarabel::ClarabelSolver;
    use crate::sdp::{SdpSolver, SolveStatus};

    fn solve(p: &SdpProblem) -> crate::sdp::SolverResult {
        let r = ClarabelSolver::new().solve(p).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal, "objective {}", r.objective);
        r
    }

    /// Like `solve` but tolerates reduced-accuracy termination, which
    /// the heavily degenerate dual programs sometimes hit.
    fn solve_loose(p: &SdpProblem) -> crate::sdp::SolverResult {
        let r = ClarabelSolver::new().solve(p).unwrap();
        assert!(
            matches!(r.status, SolveStatus::Optimal | SolveStatus::Inaccurate),
            "{:?} objective {}",
            r.status,
            r.objective
        );
        r
    }

    fn ad_pair(eta: f64) -> ChannelList {
        ChannelList::new(vec![
            amplitude_damping(eta, "X1", "Y1").unwrap(),
            amplitude_damping(eta, "X2", "Y2").unwrap(),
        ])
        .unwrap()
    }

    fn delta_pair() -> ChannelList {
        ChannelList::new(vec![
            classical_noiseless(2, "X1", "Y1").unwrap(),
            classical_noiseless(2, "X2", "Y2").unwrap(),
        ])
        .unwrap()
    }

    fn ket0(label: &str) -> LabeledOperator<num_complex::Complex64> {
        let layout = crate::layout::SystemLayout::new(vec![(label, 2)]).unwrap();
        let mut op = LabeledOperator::zeros(layout);
        op.set(0, 0, num_complex::Complex64::ONE);
        op
    }

    fn replacement_pair() -> ChannelList {
        ChannelList::new(vec![
            replacement_channel(ket0("Y1"), 2, "X1").unwrap(),
            replacement_channel(ket0("Y2"), 2, "X2").unwrap(),
        ])
        .unwrap()
    }

    fn single(list: crate::channels::ChoiChannel) -> ChannelList {
        ChannelList::new(vec![list]).unwrap()
    }

    #[test]
    fn free_single_ideal_bit() {
        let list = single(classical_noiseless(2, "X1", "Y1").unwrap());
        let r = solve(&build_capacity_free(&list, 0.0).unwrap());
        assert!((r.objective - 2.0).abs() < 1e-6, "{}", r.objective);
        let rp = solve(&build_capacity_freepar(&list, 0.0).unwrap());
        assert!((rp.objective - 2.0).abs() < 1e-6, "{}", rp.objective);
    }

    #[test]
    fn free_replacement_pair_no_signaling() {
        let r = solve(&build_capacity_free(&replacement_pair(), 0.0).unwrap());
        assert!((r.objective - 1.0).abs() < 1e-6, "{}", r.objective);
    }

    #[test]
    fn free_ad_pair_bracket() {
        let r = solve(&build_capacity_free(&ad_pair(0.1), 0.0).unwrap());
        assert!(
            r.objective >= 2.0 - 1e-6 && r.objective <= 2.5 + 1e-6,
            "{}",
            r.objective
        );
    }

    #[test]
    fn freedef_ideal_pair() {
        let r = solve(&build_capacity_freedef2(&delta_pair(), 0.0).unwrap());
        assert!((r.objective - 4.0).abs() < 1e-5, "{}", r.objective);
    }

    #[test]
    fn freedef_ad_pair_bracket() {
        let r = solve(&build_capacity_freedef2(&ad_pair(0.1), 0.0).unwrap());
        assert!(
            r.objective >= 1.0 - 1e-6 && r.objective <= 1.95 + 1e-6,
            "{}",
            r.objective
        );
    }

    #[test]
    fn identity_pair_superdense_value() {
        // Two noiseless qubit channels with entanglement assistance
        // carry two bits each (superdense coding), so m* = 16 for every
        // class.
        let r = solve(&build_capacity_freedef2(&ad_pair(0.0), 0.0).unwrap());
        assert!((r.objective - 16.0).abs() < 1e-5, "{}", r.objective);
        let r = solve(&build_capacity_freepar(&ad_pair(0.0), 0.0).unwrap());
        assert!((r.objective - 16.0).abs() < 1e-5, "{}", r.objective);
    }

    #[test]
    fn freefix_ideal_pair_both_orders() {
        for order in [(0, 1), (1, 0)] {
            let r = solve(&build_capacity_freefix2(&delta_pair(), 0.0, order).unwrap());
            assert!((r.objective - 4.0).abs() < 1e-5, "{order:?}: {}", r.objective);
        }
    }

    #[test]
    fn freefix_order_symmetry_for_identical_channels() {
        let a = solve(&build_capacity_freefix2(&ad_pair(0.1), 0.0, (0, 1)).unwrap());
        let b = solve(&build_capacity_freefix2(&ad_pair(0.1), 0.0, (1, 0)).unwrap());
        assert!((a.objective - b.objective).abs() < 1e-6);
    }

    #[test]
    fn freepar_ideal_channel_m() {
        for m in [2usize, 5] {
            let list = single(classical_noiseless(m, "X1", "Y1").unwrap());
            let r = solve(&build_capacity_freepar(&list, 0.0).unwrap());
            assert!((r.objective - m as f64).abs() < 1e-5, "{}", r.objective);
        }
    }

    #[test]
    fn freepar_bit_flip_half() {
        // p = 1/2 bit flip is noiseless on |±⟩, so 1 bit goes through.
        let list = single(pauli_channel(&[0.5, 0.5, 0.0, 0.0], 1, "X1", "Y1").unwrap());
        let r = solve(&build_capacity_freepar(&list, 0.0).unwrap());
        assert!((r.objective - 2.0).abs() < 1e-5, "{}", r.objective);
    }

    #[test]
    fn freepar_below_freedef_on_ad() {
        let par = solve(&build_capacity_freepar(&ad_pair(0.1), 0.0).unwrap());
        let def = solve(&build_capacity_freedef2(&ad_pair(0.1), 0.0).unwrap());
        assert!(par.objective <= def.objective + 1e-6);
    }

    #[test]
    fn dual_free_bounds() {
        let r = solve_loose(&build_zero_error_dual_free(&ad_pair(0.1)).unwrap());
        assert!(r.objective <= 2.5 + 1e-4, "{}", r.objective);
        let primal = solve(&build_capacity_free(&ad_pair(0.1), 0.0).unwrap());
        assert!(primal.objective <= r.objective + 1e-4);
        let ideal = solve_loose(&build_zero_error_dual_free(&delta_pair()).unwrap());
        assert!(ideal.objective >= 4.0 - 1e-4, "{}", ideal.objective);
    }

    #[test]
    fn dual_freedef_bound() {
        let r = solve_loose(&build_zero_error_dual_freedef2(&ad_pair(0.1)).unwrap());
        assert!(r.objective <= 1.95 + 1e-4, "{}", r.objective);
        let primal = solve(&build_capacity_freedef2(&ad_pair(0.1), 0.0).unwrap());
        assert!(primal.objective <= r.objective + 1e-4);
    }

    #[test]
    fn sim_cost_identity_qubit() {
        let id = pauli_channel(&[1.0, 0.0, 0.0, 0.0], 1, "A", "B").unwrap();
        let r = solve(&build_sim_cost_par(&id, 0.0).unwrap());
        assert!((r.objective - 4.0).abs() < 1e-6, "{}", r.objective);
    }

    #[test]
    fn sim_cost_replacement_and_delta() {
        let rep = replacement_channel(ket0("B"), 2, "A").unwrap();
        let r = solve(&build_sim_cost_par(&rep, 0.0).unwrap());
        assert!((r.objective - 1.0).abs() < 1e-6, "{}", r.objective);
        let delta = classical_noiseless(2, "A", "B").unwrap();
        let r = solve(&build_sim_cost_par(&delta, 0.0).unwrap());
        assert!((r.objective - 2.0).abs() < 1e-6, "{}", r.objective);
    }

    #[test]
    fn avg_error_ideal_and_replacement() {
        let list = single(classical_noiseless(2, "X1", "Y1").unwrap());
        let r = solve(&build_avg_error_freepar(&list, 2).unwrap());
        assert!(r.objective.abs() < 1e-7, "{}", r.objective);
        let rep = single(replacement_channel(ket0("Y1"), 2, "X1").unwrap());
        let r = solve(&build_avg_error_freepar(&rep, 2).unwrap());
        assert!((r.objective - 0.5).abs() < 1e-6, "{}", r.objective);
    }

    #[test]
    fn omega_matches_p_on_ad() {
        let list = single(amplitude_damping(0.3, "X1", "Y1").unwrap());
        let p = solve(&build_avg_error_freepar(&list, 2).unwrap());
        let w = solve(&build_omega_freepar(&list, 2).unwrap());
        assert!((p.objective - w.objective).abs() < 1e-7, "{} vs {}", p.objective, w.objective);
    }

    #[test]
    fn m_one_rejected() {
        let list = single(classical_noiseless(2, "X1", "Y1").unwrap());
        assert!(build_avg_error_freepar(&list, 1).is_err());
        assert!(build_omega_freepar(&list, 1).is_err());
    }

    #[test]
    fn bad_eps_rejected() {
        assert!(build_capacity_free(&ad_pair(0.1), 1.0).is_err());
        assert!(build_capacity_free(&ad_pair(0.1), -0.1).is_err());
    }
}
