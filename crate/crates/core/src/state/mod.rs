//! State representations for multipartite systems.
//!
//! A system of n parties with local dimensions d_1, ..., d_n is described by
//! a [`PartyShape`]. Pure states store their amplitudes as a flat row-major
//! vector over the total dimension D = prod d_i, so the flat index of the
//! multi-index (p_1, ..., p_n) is `p_1 * d_2 * ... * d_n + ... + p_n`.

mod density;
mod io;
mod product;
mod pure;

pub use density::DensityMatrix;
pub use io::{read_state_file, write_state_file, AmplitudeEntry, StateDocument};
pub use product::ProductState;
pub use pure::{bell, dicke, ghz, w, PureState};

pub(crate) use density::check_weights;
pub(crate) use product::gauge_fix as gauge_fix_vector;

use crate::error::{Error, Result};

/// Absolute tolerance for construction-time checks (normalization, trace,
/// Hermiticity).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Absolute tolerance for spectral checks (positive semidefiniteness).
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Largest total dimension accepted for a pure state.
pub const STATE_DIMENSION_CAP: usize = 1 << 20;

/// Largest total dimension accepted for a density matrix.
pub const DENSITY_DIMENSION_CAP: usize = 1 << 10;

/// Number of parties and local dimension of each.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartyShape {
    dims: Vec<usize>,
    total: usize,
}

impl PartyShape {
    /// Builds a shape from the local dimensions.
    ///
    /// Every dimension must be at least 2 and the total dimension must not
    /// exceed [`STATE_DIMENSION_CAP`].
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::NoParties);
        }
        for (party, &dim) in dims.iter().enumerate() {
            if dim < 2 {
                return Err(Error::PartyDimensionTooSmall { party, dim });
            }
        }
        let mut total = 1usize;
        for &dim in &dims {
            total = total.saturating_mul(dim);
            if total > STATE_DIMENSION_CAP {
                return Err(Error::DimensionCapExceeded {
                    total,
                    cap: STATE_DIMENSION_CAP,
                });
            }
        }
        Ok(Self { dims, total })
    }

    /// Shape of n qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// Number of parties.
    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    /// Local dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of one party.
    pub fn dim(&self, party: usize) -> usize {
        self.dims[party]
    }

    /// Total dimension D.
    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Row-major strides, so `flat = sum_i multi[i] * strides[i]`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Flat row-major index of a multi-index.
    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.dims.len() {
            return Err(Error::IndexRankMismatch {
                index: multi.to_vec(),
                expected: self.dims.len(),
                got: multi.len(),
            });
        }
        let mut flat = 0usize;
        for (&p, &d) in multi.iter().zip(&self.dims) {
            if p >= d {
                return Err(Error::IndexOutOfBounds {
                    index: multi.to_vec(),
                    dims: self.dims.clone(),
                });
            }
            flat = flat * d + p;
        }
        Ok(flat)
    }

    /// Multi-index corresponding to a flat row-major index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0usize; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            multi[i] = flat % self.dims[i];
            flat /= self.dims[i];
        }
        multi
    }

    pub(crate) fn check_same(&self, other: &PartyShape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            });
        }
        Ok(())
    }
}
