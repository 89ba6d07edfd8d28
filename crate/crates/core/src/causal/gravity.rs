//! Gravitational time dilation outside a spherical mass and the signal
//! ordering it induces between two agents.
//!
//! `g₀₀(R) = √(1 − 2GM/(c²R))` relates a local clock to a distant one,
//! `τ = g₀₀(R)·t`. Two agents at `R_A ≠ R_B` synchronise, then each sends a
//! light signal at proper time `τ*`. The agent nearer the mass (factor
//! `f_n`) receives the farther agent's signal (factor `f_f`) before sending
//! its own when
//!
//! ```text
//! τ* ≥ T_c · f_n / (1 − f_n / f_f)
//! ```
//!
//! where `T_c` is the coordinate light travel time between them.

use serde::Serialize;

use super::switch::post_select_first;
use super::{CausalOrder, SwitchOutcome};
use crate::constants::Constants;
use crate::quantum::{Operator, StateVector, Tensor};
use crate::{Error, Result};

fn schwarzschild_radius(mass: f64, k: &Constants) -> f64 {
    2.0 * k.g * mass / (k.c * k.c)
}

fn check_radius(mass: f64, r: f64, k: &Constants) -> Result<f64> {
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!(
            "mass {mass} must be finite and non-negative"
        )));
    }
    let rs = schwarzschild_radius(mass, k);
    if !(r.is_finite() && r > rs && r > 0.0) {
        return Err(Error::Domain(format!(
            "radius {r} m is not outside the horizon at {rs} m"
        )));
    }
    Ok(rs / r)
}

/// `√(1 − 2GM/(c²R))`, in `(0, 1]`.
pub fn metric_factor(mass: f64, r: f64, k: &Constants) -> Result<f64> {
    let x = check_radius(mass, r, k)?;
    Ok((1.0 - x).sqrt())
}

/// Proper time `g₀₀(R)·t` elapsed at radius `R` while a distant clock reads `t`.
pub fn proper_time(mass: f64, r: f64, t: f64, k: &Constants) -> Result<f64> {
    Ok(metric_factor(mass, r, k)? * t)
}

/// `t − τ = t(1 − g₀₀)`, evaluated without cancellation.
pub fn time_deficit(mass: f64, r: f64, t: f64, k: &Constants) -> Result<f64> {
    let x = check_radius(mass, r, k)?;
    Ok(t * x / (1.0 + (1.0 - x).sqrt()))
}

/// One classical configuration of the mass and the two agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GravitationalScenario {
    /// Mass of the body, kg.
    pub mass: f64,
    /// Alice's distance from its centre, m.
    pub r_a: f64,
    /// Bob's distance from its centre, m.
    pub r_b: f64,
    /// Light travel time between the agents, s.
    pub t_c: f64,
    /// Proper time at which both agents send, s.
    pub tau_star: f64,
    pub constants: Constants,
}

impl GravitationalScenario {
    pub fn validate(&self) -> Result<()> {
        check_radius(self.mass, self.r_a, &self.constants)?;
        check_radius(self.mass, self.r_b, &self.constants)?;
        if !(self.t_c > 0.0 && self.t_c.is_finite()) {
            return Err(Error::Domain(format!(
                "light travel time {} must be positive",
                self.t_c
            )));
        }
        if !self.tau_star.is_finite() {
            return Err(Error::Domain("sending time must be finite".into()));
        }
        Ok(())
    }

    /// The same scenario with the agents' radii exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            r_a: self.r_b,
            r_b: self.r_a,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignalOrder {
    /// Bob receives Alice's signal before sending: A≺B.
    AliceFirst,
    /// B≺A.
    BobFirst,
    /// Neither receives the other's signal before `τ*`.
    Indeterminate,
}

impl SignalOrder {
    pub fn causal_order(self) -> Option<CausalOrder> {
        match self {
            SignalOrder::AliceFirst => Some(CausalOrder::AliceFirst),
            SignalOrder::BobFirst => Some(CausalOrder::BobFirst),
            SignalOrder::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub order: SignalOrder,
    /// Smallest `τ*` at which the nearer agent hears first; infinite when
    /// both clocks tick at the same rate.
    pub threshold: f64,
}

/// Decides which agent's sending event lies in the other's causal past.
pub fn signal_order(s: &GravitationalScenario) -> Result<OrderVerdict> {
    s.validate()?;
    if s.r_a == s.r_b {
        return Err(Error::DegenerateConfiguration(
            "agents at equal radii have identical clocks; the ordering threshold is undefined"
                .into(),
        ));
    }
    let f_a = metric_factor(s.mass, s.r_a, &s.constants)?;
    let f_b = metric_factor(s.mass, s.r_b, &s.constants)?;
    let bob_nearer = s.r_b < s.r_a;
    let (near, far) = if bob_nearer { (f_b, f_a) } else { (f_a, f_b) };
    let denominator = 1.0 - near / far;
    let threshold = if denominator > 0.0 {
        s.t_c * near / denominator
    } else {
        f64::INFINITY
    };
    let order = if s.tau_star >= threshold {
        if bob_nearer {
            SignalOrder::AliceFirst
        } else {
            SignalOrder::BobFirst
        }
    } else {
        SignalOrder::Indeterminate
    };
    Ok(OrderVerdict { order, threshold })
}

#[derive(Debug, Clone)]
pub struct GravSwitchOutcome {
    /// Mass ⊗ target, mass basis `|K_{A≺B}⟩ = |0⟩`, `|K_{B≺A}⟩ = |1⟩`.
    pub joint: StateVector,
    pub verdicts: [OrderVerdict; 2],
}

impl GravSwitchOutcome {
    /// Mass measured in `{|K_{A≺B}⟩ ± |K_{B≺A}⟩}`.
    pub fn pm_branches(&self) -> Result<SwitchOutcome> {
        post_select_first(self.joint.clone())
    }

    /// Mass measured in the configuration basis: probabilities and target
    /// states for `K_{A≺B}` then `K_{B≺A}`.
    pub fn configuration_branches(&self) -> Result<[(f64, Option<StateVector>); 2]> {
        Ok([
            self.joint.condition_on(0, &StateVector::zero())?,
            self.joint.condition_on(0, &StateVector::one())?,
        ])
    }
}

/// Superposes the scenario with its mirror image. Each configuration applies
/// the two operations in the order its signal verdict dictates and is tagged
/// with the mass state for that order.
pub fn gravitational_switch(
    scenario: &GravitationalScenario,
    op_a: &Operator,
    op_b: &Operator,
    target_init: &StateVector,
) -> Result<GravSwitchOutcome> {
    for op in [op_a, op_b] {
        if op.dim() != target_init.dim() {
            return Err(Error::Shape(
                "operation and target dimensions differ".into(),
            ));
        }
        op.require_unitary()?;
    }
    let configurations = [*scenario, scenario.mirrored()];
    let verdicts = [
        signal_order(&configurations[0])?,
        signal_order(&configurations[1])?,
    ];
    let mut amplitudes = vec![crate::quantum::C64::new(0.0, 0.0); 2 * target_init.dim()];
    let mut seen = [false; 2];
    for v in &verdicts {
        let (label, target) = match v.order {
            SignalOrder::AliceFirst => (0, op_b.apply(&op_a.apply(target_init)?)?),
            SignalOrder::BobFirst => (1, op_a.apply(&op_b.apply(target_init)?)?),
            SignalOrder::Indeterminate => {
                return Err(Error::ProtocolInfeasible(format!(
                    "a configuration has no definite signal order at τ* (threshold {:e} s)",
                    v.threshold
                )))
            }
        };
        if seen[label] {
            return Err(Error::ProtocolInfeasible(
                "both configurations give the same order".into(),
            ));
        }
        seen[label] = true;
        let mass = if label == 0 {
            StateVector::zero()
        } else {
            StateVector::one()
        };
        let branch = mass.tensor(&target)?;
        for (acc, x) in amplitudes.iter_mut().zip(branch.amplitudes()) {
            *acc += x * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    let mut dims = vec![2];
    dims.extend_from_slice(target_init.subsystem_dims());
    Ok(GravSwitchOutcome {
        joint: StateVector::new(amplitudes, dims)?,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_spacetime() {
        let k = Constants::SI;
        assert_eq!(metric_factor(0.0, 1.0, &k).unwrap(), 1.0);
        assert_eq!(time_deficit(0.0, 1.0, 1.0, &k).unwrap(), 0.0);
    }

    #[test]
    fn inside_horizon() {
        let k = Constants::natural();
        assert_eq!(
            metric_factor(1.0, 2.0, &k).unwrap_err().name(),
            "DomainError"
        );
        assert_eq!(
            metric_factor(1.0, 1.5, &k).unwrap_err().name(),
            "DomainError"
        );
        assert_eq!(
            metric_factor(-1.0, 3.0, &k).unwrap_err().name(),
            "DomainError"
        );
        assert!(metric_factor(1.0, 2.0 + 1e-9, &k).unwrap() > 0.0);
    }

    #[test]
    fn equal_radii_degenerate() {
        let s = GravitationalScenario {
            mass: 1.0,
            r_a: 10.0,
            r_b: 10.0,
            t_c: 1.0,
            tau_star: 100.0,
            constants: Constants::natural(),
        };
        assert_eq!(
            signal_order(&s).unwrap_err().name(),
            "DegenerateConfigurationError"
        );
    }

    #[test]
    fn massless_is_indeterminate() {
        let s = GravitationalScenario {
            mass: 0.0,
            r_a: 10.0,
            r_b: 5.0,
            t_c: 1.0,
            tau_star: 1e30,
            constants: Constants::natural(),
        };
        let v = signal_order(&s).unwrap();
        assert_eq!(v.order, SignalOrder::Indeterminate);
        assert!(v.threshold.is_infinite());
    }
}
