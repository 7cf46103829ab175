//! Seeded random inputs for the trial suites: Pauli probability vectors
//! sampled uniformly on the simplex, and random qubit channels drawn by
//! Choi sampling — a random PSD operator renormalized to trace
//! preservation by the standard `W ↦ (W_X^{−1/2} ⊗ 1) W (W_X^{−1/2} ⊗ 1)`
//! projection. All generators are deterministic functions of a seed and
//! a trial index, so every reported trial is reproducible.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{pauli_channel, ChannelError, ChannelList, ChoiChannel};
use crate::layout::SystemLayout;
use crate::op::LabeledOperator;

/// Deterministic generator for one trial of a seeded run: the seed picks
/// the run, the ChaCha stream index picks the trial within it.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One standard normal via Box–Muller.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// A probability vector of length `n` drawn uniformly from the simplex
/// (normalized unit-rate exponentials).
pub fn simplex_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut probs: Vec<f64> = (0..n)
        .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    probs
}

/// A random single-qubit Pauli channel on systems `[x, y]`.
pub fn random_pauli_channel(
    rng: &mut impl Rng,
    x: &str,
    y: &str,
) -> Result<ChoiChannel, ChannelError> {
    pauli_channel(&simplex_point(rng, 4), 1, x, y)
}

/// A pair of independent random single-qubit Pauli channels on
/// (X1, Y1) and (X2, Y2).
pub fn random_pauli_pair(rng: &mut impl Rng) -> Result<ChannelList, ChannelError> {
    ChannelList::new(vec![
        random_pauli_channel(rng, "X1", "Y1")?,
        random_pauli_channel(rng, "X2", "Y2")?,
    ])
}

/// A random channel with a real Choi operator on systems `[x, y]` of the
/// given dimensions: a real Wishart matrix `W = G Gᵀ` renormalized so
/// that `tr_Y J = 1_X`.
pub fn random_channel(
    rng: &mut impl Rng,
    x: &str,
    y: &str,
    d_in: usize,
    d_out: usize,
) -> Result<ChoiChannel, ChannelError> {
    // A few extra columns keep W full rank almost surely, so the input
    // marginal W_X is invertible.
    let d = d_in * d_out;
    let g = DMatrix::from_fn(d, d + 2, |_, _| standard_normal(rng));
    let w = &g * g.transpose();
    // W_X = tr_Y W under the big-endian index (x, y) ↦ d_out·x + y.
    let wx = DMatrix::from_fn(d_in, d_in, |a, b| {
        (0..d_out).map(|k| w[(d_out * a + k, d_out * b + k)]).sum::<f64>()
    });
    let eig = wx.symmetric_eigen();
    let inv_sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|l: f64| 1.0 / l.sqrt()))
        * eig.eigenvectors.transpose();
    let scaler = inv_sqrt.kronecker(&DMatrix::identity(d_out, d_out));
    let j = &scaler * w * &scaler;

    let layout = SystemLayout::new(vec![(x, d_in), (y, d_out)])?;
    let op = LabeledOperator::from_fn(layout, |r, c| Complex64::new(j[(r, c)], 0.0));
    ChoiChannel::new(op, vec![x.to_string()], vec![y.to_string()])
}

/// A random qubit channel with a real Choi operator on systems `[x, y]`.
pub fn random_qubit_channel(
    rng: &mut impl Rng,
    x: &str,
    y: &str,
) -> Result<ChoiChannel, ChannelError> {
    random_channel(rng, x, y, 2, 2)
}
