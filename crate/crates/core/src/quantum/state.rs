use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DVector;

use super::{c, checked_product, Tensor, C64, MAX_DIM, TOL};
use crate::{Error, Result};

/// A normalized pure state over a tensor product of subsystems.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    dims: Vec<usize>,
}

impl StateVector {
    /// Builds a state from amplitudes and subsystem dimensions. The vector
    /// must already be normalized.
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Shape(format!("invalid subsystem dims {dims:?}")));
        }
        let dim = checked_product(&dims, MAX_DIM)?;
        if dim != amplitudes.len() {
            return Err(Error::Shape(format!(
                "{} amplitudes for subsystem dims {dims:?}",
                amplitudes.len()
            )));
        }
        let amplitudes = DVector::from_vec(amplitudes);
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(Error::Contract(format!(
                "state norm² is {norm_sqr}, expected 1"
            )));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Single-subsystem state from normalized amplitudes.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let d = amplitudes.len();
        Self::new(amplitudes, vec![d])
    }

    /// Rescales an arbitrary non-zero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Contract(format!(
                "cannot normalize vector of norm {norm}"
            )));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect(), dims)
    }

    pub(crate) fn from_raw(amplitudes: DVector<C64>, dims: Vec<usize>) -> Self {
        Self { amplitudes, dims }
    }

    /// Computational basis state `|index⟩` of a `dim`-level system.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Shape(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps, vec![dim])
    }

    /// Qubit `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(vec![alpha, beta], vec![2])
    }

    /// `|0⟩`, also `|↑_z⟩`.
    pub fn zero() -> Self {
        Self::from_raw(DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]), vec![2])
    }

    /// `|1⟩`, also `|↓_z⟩`.
    pub fn one() -> Self {
        Self::from_raw(DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]), vec![2])
    }

    /// `|+⟩ = (|0⟩+|1⟩)/√2`, also `|↑_x⟩`.
    pub fn plus() -> Self {
        let h = c(FRAC_1_SQRT_2, 0.0);
        Self::from_raw(DVector::from_vec(vec![h, h]), vec![2])
    }

    /// `|−⟩ = (|0⟩−|1⟩)/√2`, also `|↓_x⟩`.
    pub fn minus() -> Self {
        let h = c(FRAC_1_SQRT_2, 0.0);
        Self::from_raw(DVector::from_vec(vec![h, -h]), vec![2])
    }

    /// Computational basis state of a multi-qubit register, leftmost bit first.
    pub fn qubits(bits: &[u8]) -> Result<Self> {
        let dim = 1usize
            .checked_shl(bits.len() as u32)
            .filter(|&d| d <= MAX_DIM && !bits.is_empty())
            .ok_or(Error::Capacity {
                requested: usize::MAX,
                max: MAX_DIM,
            })?;
        let index = bits.iter().try_fold(0usize, |acc, &b| match b {
            0 | 1 => Ok((acc << 1) | b as usize),
            _ => Err(Error::Shape(format!("bit value {b} is not 0 or 1"))),
        })?;
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps, vec![2; bits.len()])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub(crate) fn vector(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "inner product of dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Entrywise comparison after removing the relative global phase.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        let Ok(overlap) = self.inner(other) else {
            return false;
        };
        if overlap.norm() < TOL {
            return false;
        }
        let phase = overlap / overlap.norm();
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }

    /// Entrywise comparison including global phase.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .amplitudes
                .iter()
                .zip(other.amplitudes.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Projects `subsystem` onto `outcome` and removes it from the register.
    /// Returns the branch probability and, when it exceeds 1e-12, the
    /// renormalized state of the remaining subsystems.
    pub fn condition_on(
        &self,
        subsystem: usize,
        outcome: &StateVector,
    ) -> Result<(f64, Option<StateVector>)> {
        let dims = self.subsystem_dims();
        if subsystem >= dims.len() || dims.len() < 2 || outcome.dim() != dims[subsystem] {
            return Err(Error::Shape(format!(
                "cannot condition subsystem {subsystem} of {dims:?} on a dim-{} state",
                outcome.dim()
            )));
        }
        let inner: usize = dims[subsystem + 1..].iter().product();
        let d = dims[subsystem];
        let outer: usize = dims[..subsystem].iter().product();
        let mut rest = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            for i in 0..inner {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    acc += outcome.amplitudes[k].conj() * self.amplitudes[(o * d + k) * inner + i];
                }
                rest.push(acc);
            }
        }
        let probability: f64 = rest.iter().map(|a| a.norm_sqr()).sum();
        let mut rest_dims = dims.to_vec();
        rest_dims.remove(subsystem);
        let state = (probability > 1e-12).then(|| {
            let norm = probability.sqrt();
            Self {
                amplitudes: DVector::from_vec(rest.iter().map(|a| a / norm).collect()),
                dims: rest_dims,
            }
        });
        Ok((probability, state))
    }

    /// Same amplitudes, different subsystem factorization.
    pub fn with_subsystem_dims(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(Error::Shape(format!(
                "dims {dims:?} do not multiply to {}",
                self.dim()
            )));
        }
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }
}

impl Tensor for StateVector {
    fn tensor_capped(&self, other: &Self, max_dim: usize) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        checked_product(&dims, max_dim)?;
        Ok(Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            dims,
        })
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateVector")
            .field("dims", &self.dims)
            .field("amplitudes", &self.amplitudes.as_slice())
            .finish()
    }
}
