//! Mach-Zehnder and Stern-Gerlach experiments.
//!
//! Path encoding: `|0⟩` is the upper arm ending at detector D1, `|1⟩` the
//! lower arm ending at D2. The beam-splitter is the real matrix
//! `S = [[1,1],[1,−1]]/√2` (no `i` on reflection) and the mirrors add no
//! relative phase, so the interferometer is `S·R(φ)·S`.

use serde::Serialize;

use crate::quantum::{born_probabilities, sample, Operator, ProjectiveMeasurement, StateVector};
use crate::rng;
use crate::{Error, Result};

/// Number of shots, or the exact Born probabilities only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Analytic,
    MonteCarlo(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachZehnderConfig {
    pub phi: f64,
    pub shots: Shots,
    pub seed: u64,
}

impl MachZehnderConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.phi.is_finite() {
            return Err(Error::Contract(format!("phase {} is not finite", self.phi)));
        }
        if self.shots == Shots::MonteCarlo(0) {
            return Err(Error::Contract(
                "Monte Carlo needs at least one shot".into(),
            ));
        }
        Ok(())
    }
}

/// `SRS|0⟩ = ((1+e^{iφ})|0⟩ + (1−e^{iφ})|1⟩)/2`.
pub fn mz_final_state(phi: f64) -> Result<StateVector> {
    let s = Operator::hadamard();
    let srs = s.matmul(&Operator::phase_shift(phi))?.matmul(&s)?;
    srs.apply(&StateVector::zero())
}

/// Which-detector measurement, outcomes `D1` and `D2`.
pub fn detectors() -> ProjectiveMeasurement {
    ProjectiveMeasurement::from_basis(&[StateVector::zero(), StateVector::one()], &["D1", "D2"])
        .expect("computational basis is a valid measurement")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MzRow {
    pub phi: f64,
    pub p_d1: f64,
    pub p_d2: f64,
    pub counts: Option<(u64, u64)>,
}

/// Detector statistics across a phase grid. Empirical counts are present
/// only for Monte Carlo runs; grid point `k` samples with a seed derived
/// from `(seed, k)`.
pub fn mz_sweep(grid: &[f64], shots: Shots, seed: u64) -> Result<Vec<MzRow>> {
    if grid.is_empty() {
        return Err(Error::Contract("phase grid is empty".into()));
    }
    let detectors = detectors();
    grid.iter()
        .enumerate()
        .map(|(k, &phi)| {
            MachZehnderConfig { phi, shots, seed }.validate()?;
            let state = mz_final_state(phi)?;
            let dist = born_probabilities(&state, &detectors)?;
            let counts = match shots {
                Shots::Analytic => None,
                Shots::MonteCarlo(n) => {
                    let r = sample(&state, &detectors, rng::derive(seed, k as u64), n)?;
                    Some((r.counts[0], r.counts[1]))
                }
            };
            Ok(MzRow {
                phi,
                p_d1: dist.probabilities[0],
                p_d2: dist.probabilities[1],
                counts,
            })
        })
        .collect()
}

/// Stern-Gerlach magnet orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    Z,
    X,
}

impl Axis {
    pub fn up(self) -> StateVector {
        match self {
            Axis::Z => StateVector::zero(),
            Axis::X => StateVector::plus(),
        }
    }

    pub fn down(self) -> StateVector {
        match self {
            Axis::Z => StateVector::one(),
            Axis::X => StateVector::minus(),
        }
    }

    /// `σ_z` or `σ_x`.
    pub fn observable(self) -> Operator {
        match self {
            Axis::Z => Operator::pauli_z(),
            Axis::X => Operator::pauli_x(),
        }
    }

    /// Outcomes `up` (+1) and `down` (−1).
    pub fn measurement(self) -> ProjectiveMeasurement {
        ProjectiveMeasurement::from_basis(&[self.up(), self.down()], &["up", "down"])
            .expect("spin eigenbasis is a valid measurement")
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::Z => "z",
            Axis::X => "x",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "z" => Ok(Axis::Z),
            "x" => Ok(Axis::X),
            other => Err(Error::Contract(format!("unknown axis '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SternGerlachChain {
    pub axes: Vec<Axis>,
    pub shots: u64,
    pub seed: u64,
    pub initial: StateVector,
}

impl SternGerlachChain {
    /// Chain starting from `|↑_z⟩`.
    pub fn new(axes: Vec<Axis>, shots: u64, seed: u64) -> Self {
        Self {
            axes,
            shots,
            seed,
            initial: StateVector::zero(),
        }
    }
}

/// Joint outcome histogram of a measurement chain. Outcome paths are
/// encoded with bit `k` (from the most significant end) set when stage `k`
/// read `down`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStatistics {
    pub axes: Vec<Axis>,
    pub shots: u64,
    path_counts: Vec<u64>,
}

/// Largest chain length supported by the joint histogram.
pub const MAX_CHAIN_STAGES: usize = 20;

impl ChainStatistics {
    fn stage_bit(&self, path: usize, stage: usize) -> usize {
        (path >> (self.axes.len() - 1 - stage)) & 1
    }

    /// Number of shots whose outcome sequence is `path` (`true` = down).
    pub fn path_count(&self, path: &[bool]) -> u64 {
        let index = path
            .iter()
            .fold(0usize, |acc, &d| (acc << 1) | usize::from(d));
        self.path_counts.get(index).copied().unwrap_or(0)
    }

    /// `(up, down)` counts at `stage`.
    pub fn stage_counts(&self, stage: usize) -> (u64, u64) {
        let mut counts = (0, 0);
        for (path, &n) in self.path_counts.iter().enumerate() {
            if self.stage_bit(path, stage) == 0 {
                counts.0 += n;
            } else {
                counts.1 += n;
            }
        }
        counts
    }

    /// Frequency of `up` at `stage` among shots whose earlier stages match
    /// `prefix`, with the number of such shots. `None` if no shot matched.
    pub fn conditional_up(&self, stage: usize, prefix: &[bool]) -> Option<(f64, u64)> {
        assert_eq!(
            prefix.len(),
            stage,
            "prefix must cover the stages before `stage`"
        );
        let (mut up, mut total) = (0u64, 0u64);
        for (path, &n) in self.path_counts.iter().enumerate() {
            let matches = prefix
                .iter()
                .enumerate()
                .all(|(k, &d)| self.stage_bit(path, k) == usize::from(d));
            if matches {
                total += n;
                if self.stage_bit(path, stage) == 0 {
                    up += n;
                }
            }
        }
        (total > 0).then(|| (up as f64 / total as f64, total))
    }
}

/// Runs sequential spin measurements, propagating each post-measurement
/// state into the next stage. Shots reaching a node of the outcome tree are
/// split between its two children with a binomial draw, which has the same
/// law as measuring every shot separately.
pub fn stern_gerlach_chain(chain: &SternGerlachChain) -> Result<ChainStatistics> {
    let stages = chain.axes.len();
    if stages == 0 {
        return Err(Error::Contract("measurement chain has no stages".into()));
    }
    if stages > MAX_CHAIN_STAGES {
        return Err(Error::Capacity {
            requested: stages,
            max: MAX_CHAIN_STAGES,
        });
    }
    if chain.shots == 0 {
        return Err(Error::Contract("at least one shot is required".into()));
    }
    if chain.initial.dim() != 2 {
        return Err(Error::Shape(
            "Stern-Gerlach chains act on a single spin-1/2".into(),
        ));
    }
    let measurements: Vec<ProjectiveMeasurement> =
        chain.axes.iter().map(|a| a.measurement()).collect();
    let mut path_counts = vec![0u64; 1usize << stages];
    let mut rng = rng::stream(chain.seed, 0);
    // Depth-first over (stage, path so far, state, shots).
    let mut stack = vec![(0usize, 0usize, chain.initial.clone(), chain.shots)];
    while let Some((stage, path, state, n)) = stack.pop() {
        if stage == stages {
            path_counts[path] = n;
            continue;
        }
        let m = &measurements[stage];
        let split = rng::multinomial(&mut rng, n, &born_probabilities(&state, m)?.probabilities);
        for outcome in (0..2).rev() {
            if split[outcome] > 0 {
                let next = m.post_state(&state, outcome)?;
                stack.push((stage + 1, (path << 1) | outcome, next, split[outcome]));
            }
        }
    }
    Ok(ChainStatistics {
        axes: chain.axes.clone(),
        shots: chain.shots,
        path_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn balanced_phase() {
        let s = mz_final_state(PI / 2.0).unwrap();
        assert!((s.amplitude(0).norm_sqr() - 0.5).abs() < 1e-15);
        assert!((s.amplitude(1).norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sweep_rejects_bad_input() {
        assert!(mz_sweep(&[], Shots::Analytic, 0).is_err());
        assert!(mz_sweep(&[f64::NAN], Shots::Analytic, 0).is_err());
        assert!(mz_sweep(&[0.0], Shots::MonteCarlo(0), 0).is_err());
    }

    #[test]
    fn analytic_rows_have_no_counts() {
        let rows = mz_sweep(&[0.0, PI], Shots::Analytic, 0).unwrap();
        assert!(rows.iter().all(|r| r.counts.is_none()));
        assert_eq!(rows[0].p_d1, 1.0);
        assert!((rows[1].p_d2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn x_chain_on_x_eigenstate() {
        let mut chain = SternGerlachChain::new(vec![Axis::X], 1000, 5);
        chain.initial = StateVector::plus();
        let stats = stern_gerlach_chain(&chain).unwrap();
        assert_eq!(stats.stage_counts(0), (1000, 0));
    }

    #[test]
    fn chain_validation() {
        assert!(stern_gerlach_chain(&SternGerlachChain::new(vec![], 10, 0)).is_err());
        assert!(stern_gerlach_chain(&SternGerlachChain::new(vec![Axis::Z], 0, 0)).is_err());
    }

    #[test]
    fn path_bookkeeping() {
        let stats =
            stern_gerlach_chain(&SternGerlachChain::new(vec![Axis::Z, Axis::Z], 500, 1)).unwrap();
        assert_eq!(stats.path_count(&[false, false]), 500);
        assert_eq!(stats.conditional_up(1, &[false]), Some((1.0, 500)));
        assert_eq!(stats.conditional_up(1, &[true]), None);
    }
}
