//! Gravitationally induced entanglement between two interferometers.
//!
//! Only the nearest pair of arms (separation `d₂`) interacts, so the joint
//! path state picks up a single phase `φ = −G m² t / (d₂ ħ)` on the branch
//! where both particles take those arms.
//!
//! Two variants are modeled:
//! * `Path`: two Mach-Zehnder interferometers, phase on `|11⟩`;
//! * `Spin`: the Stern-Gerlach adaptation after recombination, where the
//!   phase sits on `|↓↑⟩` of the spins.
//!
//! Which spin branch pairs with `d₂` in the Stern-Gerlach geometry is taken
//! as given (`|↓⟩_A` next to `|↑⟩_B`); the two variants are not reconciled
//! into one convention.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::Constants;
use crate::gates::{Circuit, Gate, SingleQubit};
use crate::quantum::{
    entanglement_entropy, negativity, schmidt_separability, Bipartition, Operator, StateVector,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GieParams {
    /// Mass of each particle, kg.
    pub m: f64,
    /// Separation of the interacting arms, m.
    pub d2: f64,
    /// Interaction time, s.
    pub t: f64,
    pub g: f64,
    pub hbar: f64,
}

impl GieParams {
    /// SI parameters with the default `G` and `ħ`.
    pub fn si(m: f64, d2: f64, t: f64) -> Self {
        Self::with_constants(m, d2, t, Constants::SI)
    }

    pub fn with_constants(m: f64, d2: f64, t: f64, k: Constants) -> Self {
        Self {
            m,
            d2,
            t,
            g: k.g,
            hbar: k.hbar,
        }
    }

    /// `G = ħ = m = d₂ = t = 1`.
    pub fn natural_units() -> Self {
        Self {
            m: 1.0,
            d2: 1.0,
            t: 1.0,
            g: 1.0,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m", self.m),
            ("d2", self.d2),
            ("t", self.t),
            ("G", self.g),
            ("hbar", self.hbar),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Contract(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for GieParams {
    /// A 10⁻¹⁴ kg pair at 250 µm for 2.5 s.
    fn default() -> Self {
        Self::si(1e-14, 2.5e-4, 2.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GiePhase {
    pub raw: f64,
    /// `raw` reduced into `[0, 2π)`.
    pub wrapped: f64,
}

/// `φ = −G m² t / (d₂ ħ)`.
pub fn gie_phase(p: &GieParams) -> Result<GiePhase> {
    p.validate()?;
    let raw = -(p.g * p.m * p.m * p.t) / (p.d2 * p.hbar);
    if !raw.is_finite() {
        return Err(Error::Overflow(format!("phase for {p:?} is {raw}")));
    }
    Ok(GiePhase {
        raw,
        wrapped: raw.rem_euclid(TAU),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GieVariant {
    Path,
    Spin,
}

impl std::str::FromStr for GieVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "path" => Ok(GieVariant::Path),
            "spin" => Ok(GieVariant::Spin),
            other => Err(Error::Contract(format!("unknown GIE variant '{other}'"))),
        }
    }
}

/// Joint state after the interaction, built as a circuit: beam-splitters on
/// both particles, then a controlled phase `diag(1, e^{iφ})` on the
/// interacting branch.
pub fn gie_state(phi: f64, variant: GieVariant) -> Result<StateVector> {
    let phase = SingleQubit::Custom(Operator::phase_shift(phi));
    let circuit = Circuit::new(2)?.with(Gate::H, &[0])?.with(Gate::H, &[1])?;
    let circuit = match variant {
        GieVariant::Path => circuit.with(Gate::CZ(phase), &[0, 1])?,
        GieVariant::Spin => circuit
            .with(Gate::X, &[1])?
            .with(Gate::CZ(phase), &[0, 1])?
            .with(Gate::X, &[1])?,
    };
    circuit.compose()?.apply(&StateVector::qubits(&[0, 0])?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GieRow {
    pub params: Option<GieParams>,
    pub phi: f64,
    pub entropy: f64,
    pub negativity: f64,
    pub separable: bool,
}

fn analyse(params: Option<GieParams>, phi: f64, variant: GieVariant) -> Result<GieRow> {
    let state = gie_state(phi, variant)?;
    let cut = Bipartition::first();
    Ok(GieRow {
        params,
        phi,
        entropy: entanglement_entropy(&state, &cut)?,
        negativity: negativity(&state, &cut)?,
        separable: schmidt_separability(&state, Some(&cut))?.is_separable(),
    })
}

/// Entanglement across a grid of physical parameters.
pub fn gie_entanglement_sweep(grid: &[GieParams], variant: GieVariant) -> Result<Vec<GieRow>> {
    if grid.is_empty() {
        return Err(Error::Contract("parameter grid is empty".into()));
    }
    grid.par_iter()
        .map(|p| analyse(Some(*p), gie_phase(p)?.raw, variant))
        .collect()
}

/// Entanglement across a grid of phases directly.
pub fn gie_phase_sweep(phis: &[f64], variant: GieVariant) -> Result<Vec<GieRow>> {
    if phis.is_empty() {
        return Err(Error::Contract("phase grid is empty".into()));
    }
    if let Some(bad) = phis.iter().find(|p| !p.is_finite()) {
        return Err(Error::Contract(format!("phase {bad} is not finite")));
    }
    phis.par_iter()
        .map(|&phi| analyse(None, phi, variant))
        .collect()
}
