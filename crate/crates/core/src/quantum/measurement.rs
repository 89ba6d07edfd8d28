use nalgebra::DMatrix;

use super::operator::max_abs_diff;
use super::{Operator, StateVector, Tensor, C64, TOL};
use crate::rng;
use crate::{Error, Result};

/// Smallest branch probability for which a post-measurement state exists.
const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

/// A complete set of orthogonal projectors with outcome labels.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    projectors: Vec<Operator>,
    labels: Vec<String>,
}

impl ProjectiveMeasurement {
    /// Validates hermiticity, idempotence, mutual orthogonality and
    /// completeness of the projectors.
    pub fn new(projectors: Vec<Operator>, labels: Vec<String>) -> Result<Self> {
        if projectors.is_empty() || projectors.len() != labels.len() {
            return Err(Error::Contract(format!(
                "{} projectors for {} labels",
                projectors.len(),
                labels.len()
            )));
        }
        let dim = projectors[0].dim();
        if projectors.iter().any(|p| p.dim() != dim) {
            return Err(Error::Shape("projectors of differing dimension".into()));
        }
        let mut sum = DMatrix::<C64>::zeros(dim, dim);
        for (i, p) in projectors.iter().enumerate() {
            if !p.is_hermitian() {
                return Err(Error::Contract(format!(
                    "projector '{}' is not Hermitian",
                    labels[i]
                )));
            }
            let sq = p.entries() * p.entries();
            if max_abs_diff(&sq, p.entries()) > TOL {
                return Err(Error::Contract(format!(
                    "projector '{}' is not idempotent",
                    labels[i]
                )));
            }
            for q in &projectors[i + 1..] {
                let cross = p.entries() * q.entries();
                if cross.iter().any(|z| z.norm() > TOL) {
                    return Err(Error::Contract(
                        "projectors are not mutually orthogonal".into(),
                    ));
                }
            }
            sum += p.entries();
        }
        if max_abs_diff(&sum, &DMatrix::identity(dim, dim)) > TOL {
            return Err(Error::Contract(
                "projectors do not sum to the identity".into(),
            ));
        }
        let projectors = projectors
            .into_iter()
            .map(|p| p.certify_hermitian())
            .collect::<Result<_>>()?;
        Ok(Self { projectors, labels })
    }

    /// Rank-one projectors onto an orthonormal basis.
    pub fn from_basis(basis: &[StateVector], labels: &[&str]) -> Result<Self> {
        Self::new(
            basis.iter().map(Operator::projector).collect(),
            labels.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Computational-basis measurement labelled by basis index.
    pub fn computational(dim: usize) -> Result<Self> {
        let basis = (0..dim)
            .map(|i| StateVector::basis(dim, i))
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<String> = (0..dim).map(|i| i.to_string()).collect();
        Self::new(basis.iter().map(Operator::projector).collect(), labels)
    }

    /// Lifts a single-subsystem measurement to act on `subsystem` of a
    /// register with the given dims.
    pub fn on_subsystem(&self, dims: &[usize], subsystem: usize) -> Result<Self> {
        if subsystem >= dims.len() || dims[subsystem] != self.dim() {
            return Err(Error::Shape(format!(
                "cannot place a dim-{} measurement on subsystem {subsystem} of {dims:?}",
                self.dim()
            )));
        }
        let left = Operator::identity(dims[..subsystem].iter().product());
        let right = Operator::identity(dims[subsystem + 1..].iter().product());
        let projectors = self
            .projectors
            .iter()
            .map(|p| left.tensor(p)?.tensor(&right))
            .collect::<Result<Vec<_>>>()?;
        Self::new(projectors, self.labels.clone())
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Contract(format!("unknown outcome label '{label}'")))
    }

    /// `Π|s⟩/‖Π|s⟩‖` for outcome `index`.
    pub fn post_state(&self, state: &StateVector, index: usize) -> Result<StateVector> {
        let projected = self.projectors[index].unnormalized_apply(state)?;
        let probability = projected.norm_squared();
        if probability < MIN_BRANCH_PROBABILITY {
            return Err(Error::PostSelectionImpossible { probability });
        }
        Ok(StateVector::from_raw(
            projected / C64::from(probability.sqrt()),
            state.subsystem_dims().to_vec(),
        ))
    }
}

/// Outcome probabilities in measurement order.
#[derive(Debug, Clone, PartialEq)]
pub struct BornDistribution {
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl BornDistribution {
    pub fn probability(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.probabilities[i])
    }
}

/// `P(label) = ⟨s|Π_label|s⟩`, clamped to `[0, 1]`.
pub fn born_probabilities(
    state: &StateVector,
    m: &ProjectiveMeasurement,
) -> Result<BornDistribution> {
    if m.dim() != state.dim() {
        return Err(Error::Shape(format!(
            "measurement of dim {} on state of dim {}",
            m.dim(),
            state.dim()
        )));
    }
    let probabilities = m
        .projectors
        .iter()
        .map(|p| Ok(p.expectation(state)?.clamp(0.0, 1.0)))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > TOL {
        return Err(Error::NumericalHealth { norm: total.sqrt() });
    }
    Ok(BornDistribution {
        labels: m.labels.clone(),
        probabilities,
    })
}

/// Histogram of repeated measurements of identically prepared states.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub shots: u64,
}

impl SampleResult {
    pub fn count(&self, label: &str) -> Option<u64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.counts[i])
    }

    pub fn frequency(&self, label: &str) -> Option<f64> {
        self.count(label).map(|c| c as f64 / self.shots as f64)
    }

    pub fn merge(&mut self, other: &SampleResult) {
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.shots += other.shots;
    }
}

/// Draws `shots` i.i.d. outcomes from the Born distribution.
pub fn sample(
    state: &StateVector,
    m: &ProjectiveMeasurement,
    seed: u64,
    shots: u64,
) -> Result<SampleResult> {
    if shots == 0 {
        return Err(Error::Contract("at least one shot is required".into()));
    }
    let dist = born_probabilities(state, m)?;
    let counts = rng::multinomial(&mut rng::stream(seed, 0), shots, &dist.probabilities);
    Ok(SampleResult {
        labels: dist.labels,
        counts,
        shots,
    })
}
