//! The quantum switch `S_{A,B} = |0⟩⟨0|_c ⊗ BA + |1⟩⟨1|_c ⊗ AB` and the
//! clock-dependent map that replaces it when each party picks its
//! operation from a local clock.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::quantum::{Operator, StateVector, Tensor, C64};
use crate::{Error, Result};

/// Operations chosen by a local clock: the `early` operation when the clock
/// reads less than `t_star`, the `late` one otherwise. The party acting
/// first uses its early operation and the party acting second its late one.
#[derive(Debug, Clone)]
pub struct ClockBroken {
    pub a_early: Operator,
    pub a_late: Operator,
    pub b_early: Operator,
    pub b_late: Operator,
    pub t_star: f64,
}

#[derive(Debug, Clone)]
pub struct SwitchSpec {
    pub op_a: Operator,
    pub op_b: Operator,
    pub control_init: StateVector,
    pub target_init: StateVector,
    pub clock_broken: Option<ClockBroken>,
}

impl SwitchSpec {
    /// Control in `|+⟩`.
    pub fn new(op_a: Operator, op_b: Operator, target_init: StateVector) -> Self {
        Self {
            op_a,
            op_b,
            control_init: StateVector::plus(),
            target_init,
            clock_broken: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.control_init.dim() != 2 {
            return Err(Error::Shape("the control must be a qubit".into()));
        }
        let mut ops = vec![&self.op_a, &self.op_b];
        if let Some(cb) = &self.clock_broken {
            if !(cb.t_star.is_finite()) {
                return Err(Error::Contract("clock threshold must be finite".into()));
            }
            ops.extend([&cb.a_early, &cb.a_late, &cb.b_early, &cb.b_late]);
        }
        for op in ops {
            if op.dim() != self.target_init.dim() {
                return Err(Error::Shape(format!(
                    "operation of dim {} on a target of dim {}",
                    op.dim(),
                    self.target_init.dim()
                )));
            }
            op.require_unitary()?;
        }
        Ok(())
    }
}

/// `|0⟩⟨0| ⊗ first_branch + |1⟩⟨1| ⊗ second_branch`.
fn controlled_pair(first_branch: &Operator, second_branch: &Operator) -> Result<Operator> {
    let d = first_branch.dim();
    let mut m = DMatrix::<C64>::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(first_branch.entries());
    m.view_mut((d, d), (d, d))
        .copy_from(second_branch.entries());
    Operator::from_matrix(m)?.certify_unitary()
}

/// `S_{A,B}` on control ⊗ target.
pub fn switch_map(op_a: &Operator, op_b: &Operator) -> Result<Operator> {
    controlled_pair(&op_b.matmul(op_a)?, &op_a.matmul(op_b)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SwitchBranch {
    /// `+` or `−` outcome of the control in `{|0⟩ ± |1⟩}`.
    pub label: &'static str,
    pub probability: f64,
    #[serde(skip)]
    pub state: Option<StateVector>,
}

#[derive(Debug, Clone)]
pub struct SwitchOutcome {
    /// Control ⊗ target after the switch.
    pub joint: StateVector,
    /// Post-selection of the control on `|+⟩` and `|−⟩`.
    pub branches: [SwitchBranch; 2],
}

impl SwitchOutcome {
    /// Target state for the `+` or `−` control outcome.
    pub fn branch(&self, label: &str) -> Result<&StateVector> {
        let b = self
            .branches
            .iter()
            .find(|b| b.label == label)
            .ok_or_else(|| Error::Contract(format!("unknown branch '{label}'")))?;
        b.state.as_ref().ok_or(Error::PostSelectionImpossible {
            probability: b.probability,
        })
    }
}

pub(crate) fn post_select_first(joint: StateVector) -> Result<SwitchOutcome> {
    let (p_plus, plus) = joint.condition_on(0, &StateVector::plus())?;
    let (p_minus, minus) = joint.condition_on(0, &StateVector::minus())?;
    Ok(SwitchOutcome {
        joint,
        branches: [
            SwitchBranch {
                label: "+",
                probability: p_plus,
                state: plus,
            },
            SwitchBranch {
                label: "-",
                probability: p_minus,
                state: minus,
            },
        ],
    })
}

/// Applies `S_{A,B}` to control ⊗ target and post-selects the control in
/// the `±` basis.
pub fn quantum_switch(spec: &SwitchSpec) -> Result<SwitchOutcome> {
    if spec.clock_broken.is_some() {
        return Err(Error::Contract(
            "clock-dependent operations do not implement the switch; use quantum_switch_clock_broken".into(),
        ));
    }
    spec.validate()?;
    let joint =
        switch_map(&spec.op_a, &spec.op_b)?.apply(&spec.control_init.tensor(&spec.target_init)?)?;
    post_select_first(joint)
}

/// `|0⟩⟨0| ⊗ B″A′ + |1⟩⟨1| ⊗ A″B′` applied to control ⊗ target.
pub fn quantum_switch_clock_broken(spec: &SwitchSpec) -> Result<SwitchOutcome> {
    let cb = spec
        .clock_broken
        .as_ref()
        .ok_or_else(|| Error::Contract("no clock-dependent operations given".into()))?;
    spec.validate()?;
    let map = controlled_pair(
        &cb.b_late.matmul(&cb.a_early)?,
        &cb.a_late.matmul(&cb.b_early)?,
    )?;
    let joint = map.apply(&spec.control_init.tensor(&spec.target_init)?)?;
    post_select_first(joint)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commuting_operations_have_no_minus_branch() {
        let out = quantum_switch(&SwitchSpec::new(
            Operator::identity(2),
            Operator::identity(2),
            StateVector::plus(),
        ))
        .unwrap();
        assert!(out.branches[1].probability < 1e-12);
        assert!(out
            .branch("+")
            .unwrap()
            .approx_eq(&StateVector::plus(), 1e-15));
        assert!(matches!(
            out.branch("-"),
            Err(Error::PostSelectionImpossible { .. })
        ));
    }

    #[test]
    fn rejects_non_unitary_and_mismatched() {
        let bad = Operator::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let spec = SwitchSpec::new(bad, Operator::identity(2), StateVector::zero());
        assert_eq!(quantum_switch(&spec).unwrap_err().name(), "ContractError");
        let spec = SwitchSpec::new(
            Operator::identity(4),
            Operator::identity(4),
            StateVector::zero(),
        );
        assert_eq!(quantum_switch(&spec).unwrap_err().name(), "ShapeError");
    }

    #[test]
    fn wrong_entry_point() {
        let mut spec = SwitchSpec::new(
            Operator::identity(2),
            Operator::identity(2),
            StateVector::zero(),
        );
        assert!(quantum_switch_clock_broken(&spec).is_err());
        spec.clock_broken = Some(ClockBroken {
            a_early: Operator::identity(2),
            a_late: Operator::identity(2),
            b_early: Operator::identity(2),
            b_late: Operator::identity(2),
            t_star: 1.0,
        });
        assert!(quantum_switch(&spec).is_err());
        assert!(quantum_switch_clock_broken(&spec).is_ok());
    }

    #[test]
    fn qutrit_target() {
        let d = 3;
        let shift =
            Operator::from_real_rows(&[&[0., 0., 1.], &[1., 0., 0.], &[0., 1., 0.]]).unwrap();
        let spec = SwitchSpec::new(shift.clone(), shift, StateVector::basis(d, 0).unwrap());
        let out = quantum_switch(&spec).unwrap();
        assert!((out.branches[0].probability - 1.0).abs() < 1e-12);
    }
}
