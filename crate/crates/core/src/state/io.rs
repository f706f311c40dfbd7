//! JSON serialization of pure states.
//!
//! The on-disk format lists the local dimensions and the nonzero amplitudes
//! by zero-based multi-index:
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "amplitudes": [
//!     { "index": [0, 0], "re": 0.7071067811865476, "im": 0.0 },
//!     { "index": [1, 1], "re": 0.7071067811865476, "im": 0.0 }
//!   ]
//! }
//! ```
//!
//! Amplitudes are normalized on load, so documents written by other tools
//! do not need to be normalized exactly.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state::{PartyShape, PureState};

/// One nonzero amplitude.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub index: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// Serializable form of a pure state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateDocument {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<AmplitudeEntry>,
}

impl StateDocument {
    pub fn from_state(psi: &PureState) -> Self {
        let shape = psi.shape();
        let amplitudes = psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(flat, a)| AmplitudeEntry {
                index: shape.multi_index(flat),
                re: a.re,
                im: a.im,
            })
            .collect();
        Self {
            dims: shape.dims().to_vec(),
            amplitudes,
        }
    }

    pub fn into_state(self) -> Result<PureState> {
        let shape = PartyShape::new(self.dims)?;
        let entries: Vec<(Vec<usize>, Complex64)> = self
            .amplitudes
            .into_iter()
            .map(|e| (e.index, Complex64::new(e.re, e.im)))
            .collect();
        PureState::from_entries(shape, &entries)
    }
}

/// Loads a pure state from a JSON file.
pub fn read_state_file(path: impl AsRef<Path>) -> Result<PureState> {
    let text = fs::read_to_string(path)?;
    let doc: StateDocument = serde_json::from_str(&text)?;
    doc.into_state()
}

/// Writes a pure state as pretty-printed JSON.
pub fn write_state_file(path: impl AsRef<Path>, psi: &PureState) -> Result<()> {
    let doc = StateDocument::from_state(psi);
    let text = serde_json::to_string_pretty(&doc)?;
    fs::write(path, text + "\n")?;
    Ok(())
}
