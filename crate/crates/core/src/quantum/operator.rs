use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use super::{c, checked_product, StateVector, Tensor, C64, NORM_DRIFT_TOL, TOL};
use crate::{Error, Result};

/// What has been verified about an [`Operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    None,
    Unitary,
    Hermitian,
}

/// A square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Operator {
    entries: DMatrix<C64>,
    certified: Certification,
}

impl Operator {
    /// Uncertified operator from a square matrix given in row-major order.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(
                "operator rows must form a non-empty square matrix".into(),
            ));
        }
        let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Ok(Self {
            entries,
            certified: Certification::None,
        })
    }

    /// Uncertified operator from real entries in row-major order.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_matrix(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::Shape(format!(
                "operator must be square, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self {
            entries,
            certified: Certification::None,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
            certified: Certification::Unitary,
        }
    }

    /// σ_x, the Not gate.
    pub fn pauli_x() -> Self {
        Self::fixed([[0.0, 1.0], [1.0, 0.0]], Certification::Unitary)
    }

    pub fn pauli_y() -> Self {
        let entries =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        Self {
            entries,
            certified: Certification::Unitary,
        }
    }

    /// σ_z.
    pub fn pauli_z() -> Self {
        Self::fixed([[1.0, 0.0], [0.0, -1.0]], Certification::Unitary)
    }

    /// The real beam-splitter / Hadamard matrix `[[1,1],[1,−1]]/√2`.
    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::fixed([[h, h], [h, -h]], Certification::Unitary)
    }

    /// Phase shifter `diag(1, e^{iφ})`.
    pub fn phase_shift(phi: f64) -> Self {
        let entries = DMatrix::from_row_slice(
            2,
            2,
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                C64::from_polar(1.0, phi),
            ],
        );
        Self {
            entries,
            certified: Certification::Unitary,
        }
    }

    /// Projector `|v⟩⟨v|`.
    pub fn projector(v: &StateVector) -> Self {
        let col = v.vector();
        Self {
            entries: col * col.adjoint(),
            certified: Certification::Hermitian,
        }
    }

    fn fixed(rows: [[f64; 2]; 2], certified: Certification) -> Self {
        let entries = DMatrix::from_fn(2, 2, |i, j| c(rows[i][j], 0.0));
        Self { entries, certified }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn certification(&self) -> Certification {
        self.certified
    }

    pub fn is_unitary(&self) -> bool {
        let n = self.dim();
        let product = self.entries.adjoint() * &self.entries;
        max_abs_diff(&product, &DMatrix::identity(n, n)) <= TOL
    }

    pub fn is_hermitian(&self) -> bool {
        max_abs_diff(&self.entries, &self.entries.adjoint()) <= TOL
    }

    /// Verifies `U†U = 𝟙` and marks the operator unitary.
    pub fn certify_unitary(mut self) -> Result<Self> {
        if !self.is_unitary() {
            return Err(Error::Contract(
                "operator is not unitary within 1e-9".into(),
            ));
        }
        self.certified = Certification::Unitary;
        Ok(self)
    }

    /// Verifies `M = M†` and marks the operator Hermitian.
    pub fn certify_hermitian(mut self) -> Result<Self> {
        if !self.is_hermitian() {
            return Err(Error::Contract(
                "operator is not Hermitian within 1e-9".into(),
            ));
        }
        self.certified = Certification::Hermitian;
        Ok(self)
    }

    pub fn require_unitary(&self) -> Result<()> {
        match self.certified {
            Certification::Unitary => Ok(()),
            _ if self.is_unitary() => Ok(()),
            _ => Err(Error::Contract("operator is not unitary".into())),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            certified: self.certified,
        }
    }

    /// Matrix product `self · rhs`, i.e. `rhs` acts first.
    pub fn matmul(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim())?;
        let certified = match (self.certified, rhs.certified) {
            (Certification::Unitary, Certification::Unitary) => Certification::Unitary,
            _ => Certification::None,
        };
        Ok(Self {
            entries: &self.entries * &rhs.entries,
            certified,
        })
    }

    /// Uncertified linear combination `α·self + β·other`.
    pub fn combine(&self, alpha: C64, other: &Operator, beta: C64) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            entries: self.entries.map(|x| x * alpha) + other.entries.map(|x| x * beta),
            certified: Certification::None,
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            entries: self.entries.map(|x| x * factor),
            certified: Certification::None,
        }
    }

    /// Applies a unitary to a state. Fails on non-unitary operators or if the
    /// output norm drifts by more than 1e-6.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.require_unitary()?;
        let out = self.unnormalized_apply(state)?;
        let norm = out.norm();
        if (norm - 1.0).abs() > NORM_DRIFT_TOL {
            return Err(Error::NumericalHealth { norm });
        }
        Ok(StateVector::from_raw(out, state.subsystem_dims().to_vec()))
    }

    /// Plain matrix-vector product without any unitarity requirement.
    pub fn unnormalized_apply(&self, state: &StateVector) -> Result<DVector<C64>> {
        self.check_dim(state.dim())?;
        Ok(&self.entries * state.vector())
    }

    /// `⟨s|self|s⟩`, requires a Hermitian operator.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if self.certified != Certification::Hermitian && !self.is_hermitian() {
            return Err(Error::Contract("observable is not Hermitian".into()));
        }
        let value = state.vector().dotc(&self.unnormalized_apply(state)?);
        Ok(value.re)
    }

    /// Largest entrywise deviation from another operator.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs_diff(&self.entries, &other.entries)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::Shape(format!(
                "operator of dim {} against dim {dim}",
                self.dim()
            )));
        }
        Ok(())
    }
}

impl Tensor for Operator {
    fn tensor_capped(&self, other: &Self, max_dim: usize) -> Result<Self> {
        checked_product(&[self.dim(), other.dim()], max_dim)?;
        let certified = if self.certified == other.certified {
            self.certified
        } else {
            Certification::None
        };
        Ok(Self {
            entries: self.entries.kronecker(&other.entries),
            certified,
        })
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({:?}) [", self.certified)?;
        for row in self.entries.row_iter() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
