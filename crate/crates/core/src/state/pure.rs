//! Dense pure states and a few standard families.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::PartyShape;

/// Normalized pure state |psi> stored as a flat row-major amplitude vector.
#[derive(Clone, Debug)]
pub struct PureState {
    shape: PartyShape,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from a full amplitude vector, normalizing it.
    pub fn new(shape: PartyShape, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != shape.total_dim() {
            return Err(Error::AmplitudeLengthMismatch {
                expected: shape.total_dim(),
                got: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { shape, amplitudes })
    }

    /// Builds a state from sparse (multi-index, amplitude) entries.
    ///
    /// Unlisted amplitudes are zero. Duplicate indices are rejected rather
    /// than summed, since they usually indicate a typo in the input.
    pub fn from_entries(shape: PartyShape, entries: &[(Vec<usize>, Complex64)]) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; shape.total_dim()];
        let mut seen = vec![false; shape.total_dim()];
        for (multi, value) in entries {
            let flat = shape.flat_index(multi)?;
            if seen[flat] {
                return Err(Error::DuplicateIndex {
                    index: multi.clone(),
                });
            }
            seen[flat] = true;
            amplitudes[flat] = *value;
        }
        Self::new(shape, amplitudes)
    }

    pub fn shape(&self) -> &PartyShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude at a multi-index.
    pub fn amplitude(&self, multi: &[usize]) -> Result<Complex64> {
        Ok(self.amplitudes[self.shape.flat_index(multi)?])
    }

    /// Inner product <self|other>.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        self.shape.check_same(&other.shape)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies one local operator per party, renormalizing the result.
    ///
    /// The operators are assumed unitary; `ops[i]` must be `d_i x d_i`.
    pub fn apply_local_unitaries(&self, ops: &[DMatrix<Complex64>]) -> Result<PureState> {
        if ops.len() != self.shape.party_count() {
            return Err(Error::IndexRankMismatch {
                index: vec![],
                expected: self.shape.party_count(),
                got: ops.len(),
            });
        }
        let strides = self.shape.strides();
        let mut amplitudes = self.amplitudes.clone();
        for (party, op) in ops.iter().enumerate() {
            let d = self.shape.dim(party);
            if op.nrows() != d || op.ncols() != d {
                return Err(Error::MatrixSizeMismatch {
                    rows: op.nrows(),
                    cols: op.ncols(),
                    expected: d,
                });
            }
            let stride = strides[party];
            let mut next = vec![Complex64::ZERO; amplitudes.len()];
            for (flat, out) in next.iter_mut().enumerate() {
                let p = (flat / stride) % d;
                let base = flat - p * stride;
                let mut acc = Complex64::ZERO;
                for q in 0..d {
                    acc += op[(p, q)] * amplitudes[base + q * stride];
                }
                *out = acc;
            }
            amplitudes = next;
        }
        PureState::new(self.shape.clone(), amplitudes)
    }

    /// Checks that the stored vector is still normalized.
    pub fn norm_error(&self) -> f64 {
        (l2_norm(&self.amplitudes) - 1.0).abs()
    }
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// |GHZ_n> = (|0...0> + |1...1>) / sqrt(2).
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let shape = PartyShape::qubits(n)?;
    let one = Complex64::new(1.0, 0.0);
    PureState::from_entries(shape, &[(vec![0; n], one), (vec![1; n], one)])
}

/// Symmetric Dicke state of n qubits with k excitations: the equal-weight
/// superposition of all basis states with exactly k ones.
pub fn dicke(n: usize, k: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    if k == 0 || k >= n {
        return Err(Error::ParameterOutOfRange {
            name: "k",
            value: k as f64,
        });
    }
    let shape = PartyShape::qubits(n)?;
    let one = Complex64::new(1.0, 0.0);
    let mut amplitudes = vec![Complex64::ZERO; shape.total_dim()];
    for (flat, a) in amplitudes.iter_mut().enumerate() {
        if flat.count_ones() as usize == k {
            *a = one;
        }
    }
    PureState::new(shape, amplitudes)
}

/// |W_n> = (|10...0> + |01...0> + ... + |00...1>) / sqrt(n).
pub fn w(n: usize) -> Result<PureState> {
    dicke(n, 1)
}

/// The Bell state (|00> + |11>) / sqrt(2).
pub fn bell() -> PureState {
    ghz(2).expect("two qubits are always valid")
}
