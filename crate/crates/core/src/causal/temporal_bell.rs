//! Two copies of a gravitational switch sharing one mass in a superposition
//! of configurations. Measuring the mass in the `±` basis leaves the two
//! targets in
//!
//! ```text
//! (B₁A₁|ψ₁⟩ ⊗ B₂A₂|ψ₂⟩ ± A₁B₁|ψ₁⟩ ⊗ A₂B₂|ψ₂⟩)/√2
//! ```
//!
//! which, for non-commuting operations, can be entangled enough to violate
//! the CHSH inequality.
//!
//! CHSH settings are chosen per branch from its correlation matrix, so each
//! branch is scored at the largest value its state allows.

use serde::Serialize;

use crate::nonlocality::{optimal_strategy, quantum_chsh, QuantumChsh};
use crate::quantum::{entanglement_entropy, Bipartition, Operator, StateVector, Tensor, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct TemporalBellBranch {
    pub label: &'static str,
    pub probability: f64,
    #[serde(skip)]
    pub state: Option<StateVector>,
    pub entropy: Option<f64>,
    pub chsh: Option<QuantumChsh>,
}

#[derive(Debug, Clone)]
pub struct TemporalBellOutcome {
    /// Mass ⊗ S₁ ⊗ S₂.
    pub joint: StateVector,
    pub branches: [TemporalBellBranch; 2],
}

/// Runs the protocol with `A₁ = A₂ = op_a` and `B₁ = B₂ = op_b` on the
/// two-qubit initial state `init`. Branches with probability below 1e-12
/// are reported without a state or CHSH score.
pub fn temporal_bell_protocol(
    op_a: &Operator,
    op_b: &Operator,
    init: &StateVector,
) -> Result<TemporalBellOutcome> {
    if init.subsystem_dims() != [2, 2] {
        return Err(Error::Shape(format!(
            "initial state must be two qubits, got dims {:?}",
            init.subsystem_dims()
        )));
    }
    for op in [op_a, op_b] {
        if op.dim() != 2 {
            return Err(Error::Shape("operations must be 2×2".into()));
        }
        op.require_unitary()?;
    }
    let ba = op_b.matmul(op_a)?;
    let ab = op_a.matmul(op_b)?;
    let a_then_b = ba.tensor(&ba)?.apply(init)?;
    let b_then_a = ab.tensor(&ab)?.apply(init)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amplitudes: Vec<C64> = a_then_b
        .amplitudes()
        .iter()
        .chain(b_then_a.amplitudes())
        .map(|x| x * h)
        .collect();
    let joint = StateVector::new(amplitudes, vec![2, 2, 2])?;

    let branch = |label: &'static str, mass: StateVector| -> Result<TemporalBellBranch> {
        let (probability, state) = joint.condition_on(0, &mass)?;
        let (entropy, chsh) = match &state {
            Some(s) => (
                Some(entanglement_entropy(s, &Bipartition::first())?),
                Some(quantum_chsh(&optimal_strategy(s)?)?),
            ),
            None => (None, None),
        };
        Ok(TemporalBellBranch {
            label,
            probability,
            state,
            entropy,
            chsh,
        })
    };
    let branches = [
        branch("+", StateVector::plus())?,
        branch("-", StateVector::minus())?,
    ];
    Ok(TemporalBellOutcome { joint, branches })
}
