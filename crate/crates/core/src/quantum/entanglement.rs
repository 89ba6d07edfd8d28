use nalgebra::DMatrix;

use super::density::{hermitian_eigenvalues, Split};
use super::{DensityMatrix, StateVector, C64, TOL};
use crate::{Error, Result};

/// Split of a register into side A (listed subsystems) and side B (the rest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: Vec<usize>) -> Self {
        Self { side_a }
    }

    /// Subsystem 0 against everything else.
    pub fn first() -> Self {
        Self::new(vec![0])
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    /// The complementary cut for a register of `n` subsystems.
    pub fn complement(&self, n: usize) -> Self {
        Self::new((0..n).filter(|i| !self.side_a.contains(i)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    Separable,
    Entangled,
}

/// Schmidt coefficients (non-zero singular values, descending) across a cut.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub verdict: Separability,
    pub coefficients: Vec<f64>,
}

impl SchmidtDecomposition {
    pub fn is_separable(&self) -> bool {
        self.verdict == Separability::Separable
    }
}

/// Amplitude matrix with rows indexed by side A and columns by side B.
fn amplitude_matrix(state: &StateVector, cut: &Bipartition) -> Result<(DMatrix<C64>, Split)> {
    let split = Split::from_bipartition(state.subsystem_dims(), cut)?;
    let m = DMatrix::from_fn(split.kept_dim(), split.traced_dim(), |r, c| {
        state.amplitude(split.full_index(r, c))
    });
    Ok((m, split))
}

impl StateVector {
    /// Reduced state on `keep`, computed as `ΨΨ†` from the reshaped amplitudes.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(self.subsystem_dims(), keep)?;
        let m = DMatrix::from_fn(split.kept_dim(), split.traced_dim(), |r, c| {
            self.amplitude(split.full_index(r, c))
        });
        DensityMatrix::new(&m * m.adjoint(), split.kept_dims())
    }
}

/// Entropy of the reduced state on side A, in bits.
pub fn entanglement_entropy(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    let (m, split) = amplitude_matrix(state, cut)?;
    let reduced = DensityMatrix::new(&m * m.adjoint(), split.kept_dims())?;
    let ceiling = (split.kept_dim().min(split.traced_dim()) as f64).log2();
    Ok(reduced.entropy().clamp(0.0, ceiling))
}

/// Singular values of the amplitude matrix; separable iff exactly one
/// exceeds 1e-9. Without an explicit cut the state must have exactly two
/// subsystems.
pub fn schmidt_separability(
    state: &StateVector,
    cut: Option<&Bipartition>,
) -> Result<SchmidtDecomposition> {
    let default_cut;
    let cut = match cut {
        Some(c) => c,
        None if state.subsystem_dims().len() == 2 => {
            default_cut = Bipartition::first();
            &default_cut
        }
        None => {
            return Err(Error::Contract(format!(
                "{} subsystems need an explicit bipartition",
                state.subsystem_dims().len()
            )))
        }
    };
    let (m, _) = amplitude_matrix(state, cut)?;
    let mut coefficients: Vec<f64> = m
        .singular_values()
        .iter()
        .copied()
        .filter(|&s| s > TOL)
        .collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    let verdict = if coefficients.len() == 1 {
        Separability::Separable
    } else {
        Separability::Entangled
    };
    Ok(SchmidtDecomposition {
        verdict,
        coefficients,
    })
}

/// Sum of the magnitudes of the negative eigenvalues of the partial
/// transpose over side A.
pub fn negativity(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    Split::from_bipartition(state.subsystem_dims(), cut)?;
    let pt = DensityMatrix::from_pure(state).partial_transpose(cut.side_a())?;
    Ok(hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l))
}
