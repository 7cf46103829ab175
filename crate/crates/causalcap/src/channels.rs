//! Constructors and validators for the channel families used throughout:
//! amplitude damping, Pauli channels, replacement channels, noiseless
//! classical channels, and the tensoring of channel lists into a single Choi
//! operator.
//!
//! Choi normalization is unnormalized: `tr_out J = 1_in`, so `tr J = d_in`.

use crate::error::OpError;
use crate::layout::SystemLayout;
use crate::linalg::{min_eigenvalue_c64, real_part};
use crate::op::LabeledOperator;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// PSD slack allowed for float-domain Choi operators.
pub const PSD_TOL: f64 = 1e-10;
/// Entrywise tolerance for trace preservation.
pub const TP_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace over outputs deviates from identity by {0:.3e}")]
    NotTracePreserving(f64),
    #[error("state is not a density matrix: {0}")]
    NotDensity(String),
    #[error(transparent)]
    Op(#[from] OpError),
}

/// A validated channel Choi operator with declared input/output label sets.
#[derive(Clone, Debug)]
pub struct ChoiChannel {
    op: LabeledOperator<Complex64>,
    input_labels: Vec<String>,
    output_labels: Vec<String>,
}

impl ChoiChannel {
    /// Generic loader: validates PSD and trace preservation.
    pub fn new(
        op: LabeledOperator<Complex64>,
        input_labels: Vec<String>,
        output_labels: Vec<String>,
    ) -> Result<Self, ChannelError> {
        for l in input_labels.iter().chain(&output_labels) {
            op.layout().position(l)?;
        }
        let min_eig = min_eigenvalue_c64(&op);
        if min_eig < -PSD_TOL {
            return Err(ChannelError::NotPsd(min_eig));
        }
        let outs: Vec<&str> = output_labels.iter().map(String::as_str).collect();
        let marginal = op.partial_trace(&outs)?;
        let id = LabeledOperator::identity(marginal.layout().clone());
        let defect = marginal.max_abs_diff(&id)?;
        if defect > TP_TOL {
            return Err(ChannelError::NotTracePreserving(defect));
        }
        Ok(Self {
            op,
            input_labels,
            output_labels,
        })
    }

    pub fn op(&self) -> &LabeledOperator<Complex64> {
        &self.op
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    /// Real entries of the Choi operator; fails on genuinely complex data.
    pub fn real_op(&self) -> Result<LabeledOperator<f64>, OpError> {
        real_part(&self.op, 1e-12)
    }
}

/// Amplitude damping channel with damping parameter `eta`, Kraus elements
/// `√η |0⟩⟨1|` and `diag(1, √(1−η))`.
pub fn amplitude_damping(eta: f64, x: &str, y: &str) -> Result<ChoiChannel, ChannelError> {
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(ChannelError::InvalidParam(format!(
            "damping parameter must lie in [0,1], got {eta}"
        )));
    }
    let layout = SystemLayout::new(vec![(x, 2), (y, 2)])?;
    let s = (1.0 - eta).sqrt();
    let mut op = LabeledOperator::zeros(layout);
    let re = |v: f64| Complex64::new(v, 0.0);
    op.set(0, 0, re(1.0));
    op.set(0, 3, re(s));
    op.set(3, 0, re(s));
    op.set(2, 2, re(eta));
    op.set(3, 3, re(1.0 - eta));
    ChoiChannel::new(op, vec![x.to_string()], vec![y.to_string()])
}

const PAULI: [[[Complex64; 2]; 2]; 4] = {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let m_one = Complex64::new(-1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let m_i = Complex64::new(0.0, -1.0);
    [
        [[one, z], [z, one]],
        [[z, one], [one, z]],
        [[z, m_i], [i, z]],
        [[one, z], [z, m_one]],
    ]
};

/// Tensor product of single-qubit Paulis selected by base-4 digits.
fn pauli_word(digits: &[usize]) -> Vec<Complex64> {
    let q = digits.len();
    let d = 1usize << q;
    let mut m = vec![Complex64::ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            let mut v = Complex64::ONE;
            for (k, &p) in digits.iter().enumerate() {
                let rb = (r >> (q - 1 - k)) & 1;
                let cb = (c >> (q - 1 - k)) & 1;
                v *= PAULI[p][rb][cb];
            }
            m[r * d + c] = v;
        }
    }
    m
}

/// The Pauli-conjugated unnormalized maximally entangled projector
/// `Γ^{i} = (1 ⊗ σ_i) |Γ⟩⟨Γ| (1 ⊗ σ_i)` for `q` qubits, on labels `(x, y)`.
pub fn gamma_projector(
    digits: &[usize],
    x: &str,
    y: &str,
) -> Result<LabeledOperator<Complex64>, OpError> {
    let q = digits.len();
    let d = 1usize << q;
    let sigma = pauli_word(digits);
    // |v⟩ = (1 ⊗ σ)|Γ⟩ has components v_{a,b} = σ[b,a]
    let layout = SystemLayout::new(vec![(x, d), (y, d)])?;
    let dim = d * d;
    let mut op = LabeledOperator::zeros(layout);
    for a in 0..d {
        for b in 0..d {
            let v1 = sigma[b * d + a];
            if v1 == Complex64::ZERO {
                continue;
            }
            for a2 in 0..d {
                for b2 in 0..d {
                    let v2 = sigma[b2 * d + a2].conj();
                    if v2 == Complex64::ZERO {
                        continue;
                    }
                    op.set(a * d + b, a2 * d + b2, v1 * v2);
                }
            }
        }
    }
    let _ = dim;
    Ok(op)
}

/// `q`-qubit Pauli channel with mixing probabilities in base-4 digit order
/// (i = 0,1,2,3 meaning I, σ₁, σ₂, σ₃ per qubit).
pub fn pauli_channel(
    probs: &[f64],
    qubits: usize,
    x: &str,
    y: &str,
) -> Result<ChoiChannel, ChannelError> {
    let expected = 4usize.pow(qubits as u32);
    if probs.len() != expected {
        return Err(ChannelError::InvalidParam(format!(
            "expected {expected} probabilities for {qubits} qubit(s), got {}",
            probs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|p| **p < 0.0 || p.is_nan()) {
        return Err(ChannelError::InvalidParam(format!(
            "negative probability {p}"
        )));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(ChannelError::InvalidParam(format!(
            "probabilities sum to {sum}, expected 1"
        )));
    }
    let d = 1usize << qubits;
    let layout = SystemLayout::new(vec![(x, d), (y, d)])?;
    let mut op = LabeledOperator::zeros(layout);
    for (i, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mut digits = vec![0usize; qubits];
        let mut rest = i;
        for k in (0..qubits).rev() {
            digits[k] = rest % 4;
            rest /= 4;
        }
        let g = gamma_projector(&digits, x, y)?;
        op = op.add(&g.scale(Complex64::new(p, 0.0)))?;
    }
    ChoiChannel::new(op, vec![x.to_string()], vec![y.to_string()])
}

/// Replacement channel `ρ ↦ ρ₀`; Choi operator `1_in ⊗ ρ₀`.
pub fn replacement_channel(
    rho0: LabeledOperator<Complex64>,
    in_dim: usize,
    x: &str,
) -> Result<ChoiChannel, ChannelError> {
    let min_eig = min_eigenvalue_c64(&rho0);
    if min_eig < -PSD_TOL {
        return Err(ChannelError::NotDensity(format!(
            "min eigenvalue {min_eig:.3e}"
        )));
    }
    let tr = rho0.trace();
    if (tr - Complex64::ONE).norm() > 1e-12 {
        return Err(ChannelError::NotDensity(format!("trace {tr}")));
    }
    if rho0.hermiticity_defect() > 1e-12 {
        return Err(ChannelError::NotDensity("not Hermitian".into()));
    }
    let y = rho0.layout().systems()[0].0.clone();
    let id_in = LabeledOperator::identity(SystemLayout::new(vec![(x, in_dim)])?);
    let op = id_in.tensor(&rho0)?;
    ChoiChannel::new(op, vec![x.to_string()], vec![y])
}

/// Noiseless classical channel on `m` messages; Choi `Σ_j |jj⟩⟨jj|`.
pub fn classical_noiseless(m: usize, x: &str, y: &str) -> Result<ChoiChannel, ChannelError> {
    if m < 1 {
        return Err(ChannelError::InvalidParam(
            "message count must be at least 1".into(),
        ));
    }
    let layout = SystemLayout::new(vec![(x, m), (y, m)])?;
    let mut op = LabeledOperator::zeros(layout);
    for j in 0..m {
        op.set(j * m + j, j * m + j, Complex64::ONE);
    }
    ChoiChannel::new(op, vec![x.to_string()], vec![y.to_string()])
}

/// An ordered list of channels with disjoint labels.
#[derive(Clone, Debug)]
pub struct ChannelList {
    channels: Vec<ChoiChannel>,
}

impl ChannelList {
    pub fn new(channels: Vec<ChoiChannel>) -> Result<Self, ChannelError> {
        let mut seen: Vec<&str> = Vec::new();
        for ch in &channels {
            for l in ch.op.layout().labels() {
                if seen.contains(&l) {
                    return Err(ChannelError::Op(OpError::DuplicateLabel(l.to_string())));
                }
            }
            for l in ch.op.layout().labels() {
                seen.push(l);
            }
        }
        // borrow of `channels` via seen ends here
        let _ = seen;
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[ChoiChannel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// All input labels followed by all output labels, in member order.
    pub fn canonical_order(&self) -> Vec<String> {
        let mut order: Vec<String> = Vec::new();
        for ch in &self.channels {
            order.extend(ch.input_labels.iter().cloned());
        }
        for ch in &self.channels {
            order.extend(ch.output_labels.iter().cloned());
        }
        order
    }

    /// Tensor of member Choi operators, permuted into the canonical layout
    /// `[X₁, …, X_N, Y₁, …, Y_N]`.
    pub fn combine(&self) -> Result<LabeledOperator<Complex64>, ChannelError> {
        let mut iter = self.channels.iter();
        let first = iter
            .next()
            .ok_or_else(|| ChannelError::InvalidParam("empty channel list".into()))?;
        let mut acc = first.op.clone();
        for ch in iter {
            acc = acc.tensor(&ch.op)?;
        }
        let order = self.canonical_order();
        let refs: Vec<&str> = order.iter().map(String::as_str).collect();
        Ok(acc.permute_systems(&refs)?)
    }

    /// Real combined Choi operator.
    pub fn combine_real(&self) -> Result<LabeledOperator<f64>, ChannelError> {
        Ok(real_part(&self.combine()?, 1e-12)?)
    }

    /// Slot label pairs `(X_i, Y_i)`.
    pub fn slot_pairs(&self) -> Vec<(String, String)> {
        self.channels
            .iter()
            .map(|ch| {
                (
                    ch.input_labels[0].clone(),
                    ch.output_labels[0].clone(),
                )
            })
            .collect()
    }
}

/// Channel description as read from a JSON spec file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelSpec {
    Ad { eta: f64 },
    Pauli { probs: Vec<f64>, qubits: usize },
    Replacement { rho_diag: Vec<f64>, in_dim: usize },
    Classical { m: usize },
}

impl ChannelSpec {
    /// Instantiate with slot labels `X{i}`/`Y{i}`.
    pub fn build(&self, slot: usize) -> Result<ChoiChannel, ChannelError> {
        let x = format!("X{slot}");
        let y = format!("Y{slot}");
        match self {
            ChannelSpec::Ad { eta } => amplitude_damping(*eta, &x, &y),
            ChannelSpec::Pauli { probs, qubits } => pauli_channel(probs, *qubits, &x, &y),
            ChannelSpec::Replacement { rho_diag, in_dim } => {
                let d = rho_diag.len();
                let layout = SystemLayout::new(vec![(y.clone(), d)])?;
                let mut rho = LabeledOperator::zeros(layout);
                for (j, &v) in rho_diag.iter().enumerate() {
                    rho.set(j, j, Complex64::new(v, 0.0));
                }
                replacement_channel(rho, *in_dim, &x)
            }
            ChannelSpec::Classical { m } => classical_noiseless(*m, &x, &y),
        }
    }
}

/// Build a channel list from specs, assigning slot labels in order.
pub fn build_list(specs: &[ChannelSpec]) -> Result<ChannelList, ChannelError> {
    let channels = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.build(i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    ChannelList::new(channels)
}
