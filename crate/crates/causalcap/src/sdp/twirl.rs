//! Pauli twirl of performance operators.
//!
//! For a list of Pauli channels the optimal performance operators can be
//! twirled into the span of the Γ-word projectors without changing the
//! objective, which is how the paper reduces the Free program to the
//! FreePar one on Pauli instances.

use crate::channels::gamma_projector;
use crate::error::OpError;
use crate::linalg::real_part;
use crate::op::LabeledOperator;

/// Projects `e` onto the span of the Γ-word projectors of the given
/// slots: twirl(E) = Σ_i tr[E·Γ^i]/4^{q_tot} · Γ^i.
///
/// Each slot is an (input, output) label pair of equal power-of-two
/// dimension; `e` must carry exactly the slot systems.
pub fn pauli_twirl(
    e: &LabeledOperator<f64>,
    slots: &[(String, String)],
) -> Result<LabeledOperator<f64>, OpError> {
    let words = gamma_words(e, slots)?;
    let q_tot: u32 = slots
        .iter()
        .map(|(x, _)| e.layout().dim_of(x).map(|d| d.trailing_zeros()))
        .sum::<Result<u32, _>>()?;
    let norm = 4f64.powi(q_tot as i32);
    let mut out = LabeledOperator::zeros(e.layout().clone());
    for gamma in &words {
        let alpha = e.matmul(gamma)?.trace() / norm;
        out = out.add(&gamma.scale(alpha))?;
    }
    Ok(out)
}

/// All Γ-word projectors on the slot systems, permuted to `e`'s layout.
fn gamma_words(
    e: &LabeledOperator<f64>,
    slots: &[(String, String)],
) -> Result<Vec<LabeledOperator<f64>>, OpError> {
    if slots.is_empty() {
        return Err(OpError::Invalid("twirl needs at least one slot".into()));
    }
    let mut expected: Vec<&str> = Vec::new();
    for (x, y) in slots {
        expected.push(x);
        expected.push(y);
    }
    let mut sorted_have: Vec<&str> = e.layout().labels().collect();
    let mut sorted_want = expected.clone();
    sorted_have.sort_unstable();
    sorted_want.sort_unstable();
    if sorted_have != sorted_want {
        return Err(OpError::Invalid(
            "operator systems do not match the slot labels".into(),
        ));
    }

    let mut qubits = Vec::with_capacity(slots.len());
    for (x, y) in slots {
        let dx = e.layout().dim_of(x)?;
        let dy = e.layout().dim_of(y)?;
        if dx != dy || !dx.is_power_of_two() {
            return Err(OpError::Invalid(format!(
                "slot ({x}, {y}) must have equal power-of-two dimensions, got {dx} and {dy}"
            )));
        }
        qubits.push(dx.trailing_zeros() as usize);
    }

    let order: Vec<&str> = e.layout().labels().collect();
    let counts: Vec<usize> = qubits.iter().map(|&q| 1usize << (2 * q)).collect();
    let total: usize = counts.iter().product();
    let mut words = Vec::with_capacity(total);
    let mut index = vec![0usize; slots.len()];
    for _ in 0..total {
        let mut op: Option<LabeledOperator<f64>> = None;
        for (slot, (x, y)) in slots.iter().enumerate() {
            let digits = base4_digits(index[slot], qubits[slot]);
            let gamma = real_part(&gamma_projector(&digits, x, y)?, 1e-12)?;
            op = Some(match op {
                None => gamma,
                Some(prev) => prev.tensor(&gamma)?,
            });
        }
        words.push(op.unwrap().permute_systems(&order)?);
        for slot in (0..slots.len()).rev() {
            index[slot] += 1;
            if index[slot] < counts[slot] {
                break;
            }
            index[slot] = 0;
        }
    }
    Ok(words)
}

fn base4_digits(mut value: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0usize; len];
    for d in digits.iter_mut().rev() {
        *d = value % 4;
        value /= 4;
    }
    digits
}
