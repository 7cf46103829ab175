//! Property suites for the tensor core: the no-signaling projection is an
//! orthogonal projection that preserves trace, and the link product agrees
//! with direct channel composition on random CPTP maps.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use causalcap::layout::SystemLayout;
use causalcap::op::LabeledOperator;
use causalcap::sampling::random_channel;

const PAIRS: [(&str, &str); 2] = [("X1", "Y1"), ("X2", "Y2")];

fn random_hermitian(seed: u64) -> LabeledOperator<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout =
        SystemLayout::new(vec![("X1", 2), ("Y1", 2), ("X2", 2), ("Y2", 2)]).unwrap();
    let dim = layout.total_dim();
    let mut op = LabeledOperator::zeros(layout);
    for i in 0..dim {
        op.set(i, i, Complex64::new(rng.random::<f64>() * 2.0 - 1.0, 0.0));
        for j in (i + 1)..dim {
            let v = Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            );
            op.set(i, j, v);
            op.set(j, i, v.conj());
        }
    }
    op
}

fn hs_inner(a: &LabeledOperator<Complex64>, b: &LabeledOperator<Complex64>) -> Complex64 {
    a.conj_transpose().matmul(b).unwrap().trace()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ns_project_is_idempotent(seed in any::<u64>()) {
        let a = random_hermitian(seed);
        let once = a.ns_project(&PAIRS).unwrap();
        let twice = once.ns_project(&PAIRS).unwrap();
        prop_assert!(once.max_abs_diff(&twice).unwrap() <= 1e-12);
    }

    #[test]
    fn ns_project_is_self_adjoint(seed in any::<u64>()) {
        let a = random_hermitian(seed);
        let b = random_hermitian(seed.wrapping_add(0x9e37_79b9));
        let lhs = hs_inner(&a.ns_project(&PAIRS).unwrap(), &b);
        let rhs = hs_inner(&a, &b.ns_project(&PAIRS).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn ns_project_preserves_trace(seed in any::<u64>()) {
        let a = random_hermitian(seed);
        let projected = a.ns_project(&PAIRS).unwrap();
        prop_assert!((a.trace() - projected.trace()).norm() <= 1e-12);
    }
}

/// Applies a channel, given by its unnormalized Choi operator on
/// `[x, y]`, to a density-like matrix: `Λ(ρ)[y,y'] = Σ ρ[x,x'] J[(x,y),(x',y')]`.
fn apply_choi(
    j: &LabeledOperator<Complex64>,
    rho: &[Vec<Complex64>],
    d_in: usize,
    d_out: usize,
) -> Vec<Vec<Complex64>> {
    let mut out = vec![vec![Complex64::ZERO; d_out]; d_out];
    for (y, row) in out.iter_mut().enumerate() {
        for (yp, value) in row.iter_mut().enumerate() {
            for x in 0..d_in {
                for xp in 0..d_in {
                    *value += rho[x][xp] * j.get(d_out * x + y, d_out * xp + yp);
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// The link product over the shared middle system equals the Choi
    /// operator of the composite channel built by applying D∘C to all
    /// matrix units, for random 2- and 3-dimensional CPTP maps.
    #[test]
    fn link_product_matches_direct_composition(
        seed in any::<u64>(),
        d_x in 2usize..=3,
        d_m in 2usize..=3,
        d_y in 2usize..=3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_channel(&mut rng, "X", "M", d_x, d_m).unwrap();
        let d = random_channel(&mut rng, "M", "Y", d_m, d_y).unwrap();
        let linked = c.op().link_product(d.op()).unwrap();

        let layout = SystemLayout::new(vec![("X", d_x), ("Y", d_y)]).unwrap();
        let mut direct = LabeledOperator::zeros(layout);
        for x in 0..d_x {
            for xp in 0..d_x {
                let mut unit = vec![vec![Complex64::ZERO; d_x]; d_x];
                unit[x][xp] = Complex64::ONE;
                let mid = apply_choi(c.op(), &unit, d_x, d_m);
                let out = apply_choi(d.op(), &mid, d_m, d_y);
                for (y, row) in out.iter().enumerate() {
                    for (yp, v) in row.iter().enumerate() {
                        direct.set(d_y * x + y, d_y * xp + yp, *v);
                    }
                }
            }
        }
        prop_assert!(linked.max_abs_diff(&direct).unwrap() <= 1e-12);
    }
}
