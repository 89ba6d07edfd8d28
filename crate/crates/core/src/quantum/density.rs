use nalgebra::DMatrix;

use super::entanglement::Bipartition;
use super::operator::max_abs_diff;
use super::{StateVector, C64, TOL};
use crate::{Error, Result};

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n || dims.iter().product::<usize>() != n {
            return Err(Error::Shape(format!(
                "{}×{} matrix for subsystem dims {dims:?}",
                n,
                entries.ncols()
            )));
        }
        if max_abs_diff(&entries, &entries.adjoint()) > TOL {
            return Err(Error::Contract("density matrix is not Hermitian".into()));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TOL || trace.im.abs() > TOL {
            return Err(Error::Contract(format!("density matrix trace is {trace}")));
        }
        let rho = Self { entries, dims };
        if let Some(min) = rho.raw_eigenvalues().into_iter().reduce(f64::min) {
            if min < -TOL {
                return Err(Error::Contract(format!(
                    "density matrix has eigenvalue {min}"
                )));
            }
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &StateVector) -> Self {
        let v = state.vector();
        Self {
            entries: v * v.adjoint(),
            dims: state.subsystem_dims().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Traces out every subsystem not listed in `keep`. The kept subsystems
    /// stay in ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(&self.dims, keep)?;
        let kept_dim = split.kept_dim();
        let mut out = DMatrix::<C64>::zeros(kept_dim, kept_dim);
        for r in 0..kept_dim {
            for c in 0..kept_dim {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..split.traced_dim() {
                    acc += self.entries[(split.full_index(r, t), split.full_index(c, t))];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(Self {
            entries: out,
            dims: split.kept_dims(),
        })
    }

    /// Transposes the indices of the subsystems listed in `subsystems`.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<DMatrix<C64>> {
        let split = Split::new(&self.dims, subsystems)?;
        let n = self.dim();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for r1 in 0..split.kept_dim() {
            for c1 in 0..split.kept_dim() {
                for r2 in 0..split.traced_dim() {
                    for c2 in 0..split.traced_dim() {
                        out[(split.full_index(r1, r2), split.full_index(c1, c2))] =
                            self.entries[(split.full_index(c1, r2), split.full_index(r1, c2))];
                    }
                }
            }
        }
        Ok(out)
    }

    fn raw_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Eigenvalues in descending order, with values in `[−1e-9, 0)` clamped to 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .raw_eigenvalues()
            .into_iter()
            .map(|l| if (-TOL..0.0).contains(&l) { 0.0 } else { l })
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.log2())
            .sum::<f64>()
            .max(0.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    // Symmetrize first so the solver sees an exactly Hermitian input.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Index bookkeeping for a split of a register into a selected part and
/// its complement. Selected subsystems are ordered ascending.
pub(crate) struct Split {
    dims: Vec<usize>,
    selected: Vec<usize>,
    rest: Vec<usize>,
}

impl Split {
    pub(crate) fn new(dims: &[usize], selected: &[usize]) -> Result<Self> {
        let mut sel = selected.to_vec();
        sel.sort_unstable();
        sel.dedup();
        if sel.is_empty() || sel.len() != selected.len() || *sel.last().unwrap() >= dims.len() {
            return Err(Error::Shape(format!(
                "invalid subsystem selection {selected:?} for {} subsystems",
                dims.len()
            )));
        }
        let rest = (0..dims.len()).filter(|i| !sel.contains(i)).collect();
        Ok(Self {
            dims: dims.to_vec(),
            selected: sel,
            rest,
        })
    }

    pub(crate) fn from_bipartition(dims: &[usize], cut: &Bipartition) -> Result<Self> {
        let split = Self::new(dims, cut.side_a())?;
        if split.rest.is_empty() {
            return Err(Error::Shape("bipartition leaves side B empty".into()));
        }
        Ok(split)
    }

    pub(crate) fn kept_dims(&self) -> Vec<usize> {
        self.selected.iter().map(|&i| self.dims[i]).collect()
    }

    pub(crate) fn kept_dim(&self) -> usize {
        self.selected.iter().map(|&i| self.dims[i]).product()
    }

    pub(crate) fn traced_dim(&self) -> usize {
        self.rest.iter().map(|&i| self.dims[i]).product()
    }

    /// Full register index from a selected-part index and a rest index.
    pub(crate) fn full_index(&self, selected_index: usize, rest_index: usize) -> usize {
        let mut digits = vec![0usize; self.dims.len()];
        scatter(selected_index, &self.selected, &self.dims, &mut digits);
        scatter(rest_index, &self.rest, &self.dims, &mut digits);
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&d, &n)| acc * n + d)
    }
}

fn scatter(mut index: usize, positions: &[usize], dims: &[usize], digits: &mut [usize]) {
    for &p in positions.iter().rev() {
        digits[p] = index % dims[p];
        index /= dims[p];
    }
}
