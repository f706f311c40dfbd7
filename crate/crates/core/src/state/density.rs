//! Density matrices for mixed states.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{
    PartyShape, PureState, CONSTRUCTION_TOL, DENSITY_DIMENSION_CAP, SPECTRAL_TOL,
};

/// Density matrix rho on a multipartite system, stored dense.
///
/// Valid instances are Hermitian, unit trace and positive semidefinite
/// within the construction tolerances.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    shape: PartyShape,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps an explicit matrix after checking all density matrix
    /// properties, including the spectrum.
    pub fn from_matrix(shape: PartyShape, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = check_density_dim(&shape)?;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::MatrixSizeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                expected: d,
            });
        }
        let deviation = hermiticity_deviation(&matrix);
        if deviation > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::TraceNotUnit { trace });
        }
        let eigen = SymmetricEigen::new(matrix.clone());
        let min_eigenvalue = eigen.eigenvalues.iter().copied().fold(f64::MAX, f64::min);
        if min_eigenvalue < -SPECTRAL_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { shape, matrix })
    }

    /// Rank-one projector |psi><psi|.
    pub fn from_pure(psi: &PureState) -> Result<Self> {
        check_density_dim(psi.shape())?;
        Ok(Self {
            shape: psi.shape().clone(),
            matrix: outer(psi.amplitudes()),
        })
    }

    /// Convex mixture sum_i w_i |psi_i><psi_i|.
    pub fn from_mixture(weights: &[f64], states: &[PureState]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyMixture);
        }
        if weights.len() != states.len() {
            return Err(Error::WeightCountMismatch {
                weights: weights.len(),
                states: states.len(),
            });
        }
        check_weights(weights)?;
        let shape = states[0].shape().clone();
        let d = check_density_dim(&shape)?;
        for psi in &states[1..] {
            shape.check_same(psi.shape())?;
        }
        let mut matrix = DMatrix::zeros(d, d);
        for (&weight, psi) in weights.iter().zip(states) {
            if weight == 0.0 {
                continue;
            }
            let a = psi.amplitudes();
            for i in 0..d {
                for j in 0..d {
                    matrix[(i, j)] += weight * a[i] * a[j].conj();
                }
            }
        }
        Ok(Self { shape, matrix })
    }

    /// The maximally mixed state 1/D.
    pub fn maximally_mixed(shape: PartyShape) -> Result<Self> {
        let d = check_density_dim(&shape)?;
        let p = Complex64::new(1.0 / d as f64, 0.0);
        Ok(Self {
            shape,
            matrix: DMatrix::from_diagonal_element(d, d, p),
        })
    }

    pub fn shape(&self) -> &PartyShape {
        &self.shape
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        self.shape.total_dim()
    }

    /// Expectation value <psi|rho|psi>, which is real for Hermitian rho.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        self.shape.check_same(psi.shape())?;
        let a = psi.amplitudes();
        let mut acc = Complex64::ZERO;
        for i in 0..a.len() {
            for j in 0..a.len() {
                acc += a[i].conj() * self.matrix[(i, j)] * a[j];
            }
        }
        debug_assert!(acc.im.abs() < SPECTRAL_TOL);
        Ok(acc.re)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eigen = SymmetricEigen::new(self.matrix.clone());
        let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Largest deviation |rho_ij - conj(rho_ji)| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.matrix)
    }
}

fn check_density_dim(shape: &PartyShape) -> Result<usize> {
    let d = shape.total_dim();
    if d > DENSITY_DIMENSION_CAP {
        return Err(Error::DimensionCapExceeded {
            total: d,
            cap: DENSITY_DIMENSION_CAP,
        });
    }
    Ok(d)
}

pub(crate) fn check_weights(weights: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (index, &value) in weights.iter().enumerate() {
        if value.is_nan() || value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
        sum += value;
    }
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::WeightSumNotUnit { sum });
    }
    Ok(())
}

fn outer(a: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj())
}

fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
