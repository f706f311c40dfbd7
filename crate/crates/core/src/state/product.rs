//! Fully product states |phi> = |c_1> x ... x |c_n>.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::pure::l2_norm;
use crate::state::{PartyShape, PureState};

/// Modulus below which an entry is not used as the phase reference.
const GAUGE_PIVOT_TOL: f64 = 1e-12;

/// Product state stored as one normalized factor per party.
///
/// Each factor carries a fixed gauge: the first entry whose modulus exceeds
/// a small threshold is rotated to be real and non-negative. Two factor
/// lists describing the same physical state therefore compare equal up to
/// floating point noise.
#[derive(Clone, Debug)]
pub struct ProductState {
    shape: PartyShape,
    factors: Vec<Vec<Complex64>>,
}

impl ProductState {
    /// Builds a product state, normalizing and gauge-fixing every factor.
    pub fn new(shape: PartyShape, mut factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.len() != shape.party_count() {
            return Err(Error::IndexRankMismatch {
                index: vec![],
                expected: shape.party_count(),
                got: factors.len(),
            });
        }
        for (party, factor) in factors.iter_mut().enumerate() {
            if factor.len() != shape.dim(party) {
                return Err(Error::FactorLengthMismatch {
                    party,
                    expected: shape.dim(party),
                    got: factor.len(),
                });
            }
            let norm = l2_norm(factor);
            if norm == 0.0 {
                return Err(Error::ZeroNorm);
            }
            for c in factor.iter_mut() {
                *c /= norm;
            }
            gauge_fix(factor);
        }
        Ok(Self { shape, factors })
    }

    /// Product basis state |levels[0]> x ... x |levels[n-1]>.
    pub fn basis(shape: PartyShape, levels: &[usize]) -> Result<Self> {
        if levels.len() != shape.party_count() {
            return Err(Error::IndexRankMismatch {
                index: levels.to_vec(),
                expected: shape.party_count(),
                got: levels.len(),
            });
        }
        let mut factors = Vec::with_capacity(levels.len());
        for (party, &level) in levels.iter().enumerate() {
            let d = shape.dim(party);
            if level >= d {
                return Err(Error::IndexOutOfBounds {
                    index: levels.to_vec(),
                    dims: shape.dims().to_vec(),
                });
            }
            let mut factor = vec![Complex64::ZERO; d];
            factor[level] = Complex64::new(1.0, 0.0);
            factors.push(factor);
        }
        Ok(Self { shape, factors })
    }

    pub fn shape(&self) -> &PartyShape {
        &self.shape
    }

    pub fn factors(&self) -> &[Vec<Complex64>] {
        &self.factors
    }

    pub fn factor(&self, party: usize) -> &[Complex64] {
        &self.factors[party]
    }

    /// Inner product <phi|psi> against a dense state, contracted without
    /// expanding the product state.
    pub fn overlap(&self, psi: &PureState) -> Result<Complex64> {
        self.shape.check_same(psi.shape())?;
        let dims = self.shape.dims();
        let mut acc = Complex64::ZERO;
        for (flat, &amp) in psi.amplitudes().iter().enumerate() {
            if amp == Complex64::ZERO {
                continue;
            }
            let mut term = amp;
            let mut rest = flat;
            for party in (0..dims.len()).rev() {
                let p = rest % dims[party];
                rest /= dims[party];
                term *= self.factors[party][p].conj();
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Expands the factors into a dense pure state.
    pub fn expand(&self) -> PureState {
        let dims = self.shape.dims();
        let mut amplitudes = vec![Complex64::new(1.0, 0.0); self.shape.total_dim()];
        for (flat, amp) in amplitudes.iter_mut().enumerate() {
            let mut rest = flat;
            for party in (0..dims.len()).rev() {
                let p = rest % dims[party];
                rest /= dims[party];
                *amp *= self.factors[party][p];
            }
        }
        PureState::new(self.shape.clone(), amplitudes)
            .expect("product of unit factors has unit norm")
    }
}

/// Rotates a vector so its first significantly nonzero entry is real and
/// non-negative. Leaves the all-small vector untouched.
pub(crate) fn gauge_fix(v: &mut [Complex64]) {
    let Some(&pivot) = v.iter().find(|c| c.norm() > GAUGE_PIVOT_TOL) else {
        return;
    };
    let rot = (pivot / pivot.norm()).conj();
    for c in v.iter_mut() {
        *c *= rot;
    }
}
