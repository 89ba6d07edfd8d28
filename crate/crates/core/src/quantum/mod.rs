//! Dense state-vector primitives: states, operators, tensor products,
//! projective measurement, reduced states and entanglement measures.
//!
//! Index convention: the leftmost tensor factor is the most significant
//! digit of a basis index, so `|0⟩ ⊗ |1⟩` is basis index 1 and
//! `|1⟩ ⊗ |0⟩` is basis index 2. This is the ordering under which CNot is
//! `[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]` with the control on the left.

mod density;
mod entanglement;
mod measurement;
mod operator;
mod state;

pub use density::DensityMatrix;
pub use entanglement::{
    entanglement_entropy, negativity, schmidt_separability, Bipartition, SchmidtDecomposition,
    Separability,
};
pub use measurement::{
    born_probabilities, sample, BornDistribution, ProjectiveMeasurement, SampleResult,
};
pub use operator::{Certification, Operator};
pub use state::StateVector;

pub use num_complex::Complex64 as C64;

/// Tolerance for structural invariants (normalization, hermiticity, unitarity).
pub const TOL: f64 = 1e-9;

/// Largest norm drift accepted after applying a certified unitary.
pub const NORM_DRIFT_TOL: f64 = 1e-6;

/// Default cap on Hilbert-space dimension.
pub const MAX_DIM: usize = 1 << 20;

/// Kronecker product, left operand most significant.
pub trait Tensor: Sized {
    fn tensor_capped(&self, other: &Self, max_dim: usize) -> crate::Result<Self>;

    fn tensor(&self, other: &Self) -> crate::Result<Self> {
        self.tensor_capped(other, MAX_DIM)
    }
}

/// Tensor product of a non-empty list of factors, left to right.
pub fn tensor_all<T: Tensor + Clone>(factors: &[T]) -> crate::Result<T> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| crate::Error::Shape("empty tensor product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.tensor(f))
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn checked_product(dims: &[usize], max_dim: usize) -> crate::Result<usize> {
    let mut total: usize = 1;
    for &d in dims {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= max_dim)
            .ok_or(crate::Error::Capacity {
                requested: dims.iter().fold(1usize, |a, &b| a.saturating_mul(b)),
                max: max_dim,
            })?;
    }
    Ok(total)
}
