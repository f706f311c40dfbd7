//! Witness combinations and mixed-state scans.
//!
//! A convex combination of witnesses, W(y) = sum_k y_k W_k, is again a
//! witness candidate: condition (i) survives convexity, and W(y) detects a
//! mixed rho whenever Tr(W(y) rho) < 0 for some y. The reference scan pairs
//! the optimal witnesses of |W_3> and its bit-flipped partner against the
//! family
//!
//! ```text
//! rho(x) = x |W><W| + (1 - x) |W~><W~|,
//! ```
//!
//! where the detector has the closed form
//!
//! ```text
//! d(x, y) = y (4/9 - x) + (1 - y) (x - 5/9),
//! ```
//!
//! negative somewhere in y for every x, so the whole family is detected.
//! A convex decomposition of a mixed state also bounds its entanglement
//! from above by the weighted measures of the components; the same bound
//! can be read off the optimal witnesses of the components, which serves as
//! a cross-check here.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::{entanglement_eigenvalue, SolverConfig};
use crate::state::{check_weights, dicke, w, DensityMatrix, PureState};
use crate::witness::{make_witness, Witness, WitnessForm};

/// A combined detector value below this counts as a detection.
pub const CERTIFICATION_TOL: f64 = 1e-12;

/// Largest allowed gap between the two routes to the decomposition bound.
pub const ROOF_CONSISTENCY_TOL: f64 = 1e-9;

/// Convex combination sum_k y_k W_k of structured witnesses.
#[derive(Clone, Debug)]
pub struct WitnessCombination {
    coefficients: Vec<f64>,
    parts: Vec<Witness>,
}

impl WitnessCombination {
    /// Builds a combination from non-negative coefficients summing to one.
    pub fn new(coefficients: Vec<f64>, parts: Vec<Witness>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyMixture);
        }
        if coefficients.len() != parts.len() {
            return Err(Error::WeightCountMismatch {
                weights: coefficients.len(),
                states: parts.len(),
            });
        }
        check_weights(&coefficients)?;
        for part in &parts {
            if matches!(part.form(), WitnessForm::General { .. }) {
                return Err(Error::StructuredWitnessRequired);
            }
            parts[0].shape().check_same(part.shape())?;
        }
        Ok(Self {
            coefficients,
            parts,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn parts(&self) -> &[Witness] {
        &self.parts
    }

    /// Combined detector value sum_k y_k Tr(W_k rho).
    pub fn detector(&self, rho: &DensityMatrix) -> Result<f64> {
        let mut acc = 0.0;
        for (&y, part) in self.coefficients.iter().zip(&self.parts) {
            acc += y * part.detector(rho)?;
        }
        Ok(acc)
    }

    /// Dense matrix sum_k y_k W_k.
    pub fn materialize(&self) -> Result<DMatrix<Complex64>> {
        let d = self.parts[0].shape().total_dim();
        let mut acc = DMatrix::zeros(d, d);
        for (&y, part) in self.coefficients.iter().zip(&self.parts) {
            acc += part.materialize()?.scale(y);
        }
        Ok(acc)
    }
}

/// The mixture x |W_3><W_3| + (1 - x) |W~_3><W~_3|.
pub fn rho_family_ww(x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterOutOfRange { name: "x", value: x });
    }
    DensityMatrix::from_mixture(&[x, 1.0 - x], &[w(3)?, dicke(3, 2)?])
}

/// Optimal witnesses of |W_3> and |W~_3>; both have Lambda_max^2 = 4/9.
fn ww_witness_pair() -> Result<(Witness, Witness)> {
    let lm2 = 4.0 / 9.0;
    Ok((
        make_witness(&w(3)?, lm2, lm2)?,
        make_witness(&dicke(3, 2)?, lm2, lm2)?,
    ))
}

/// Detector values of y W_W + (1 - y) W_W~ against rho(x) on a uniform
/// grid over the unit square.
#[derive(Clone, Debug)]
pub struct DetectorGrid {
    nx: usize,
    ny: usize,
    /// Row-major over (ix, iy).
    values: Vec<f64>,
}

impl DetectorGrid {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn x(&self, ix: usize) -> f64 {
        ix as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        iy as f64 / (self.ny - 1) as f64
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.ny + iy]
    }

    /// Cell with the smallest detector value; earlier cells win ties.
    pub fn min_cell(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, self.values[0]);
        for ix in 0..self.nx {
            for iy in 0..self.ny {
                let v = self.value(ix, iy);
                if v < best.2 {
                    best = (ix, iy, v);
                }
            }
        }
        best
    }

    /// Writes `x,y,detector` rows in scientific notation, x-major.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "x,y,detector")?;
        for ix in 0..self.nx {
            for iy in 0..self.ny {
                writeln!(
                    out,
                    "{},{},{}",
                    sci12(self.x(ix)),
                    sci12(self.y(iy)),
                    sci12(self.value(ix, iy))
                )?;
            }
        }
        Ok(())
    }
}

/// Formats like C's `%.12e`: twelve fractional digits and a signed,
/// two-digit exponent.
fn sci12(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    let formatted = format!("{value:.12e}");
    let (mantissa, exp) = formatted
        .split_once('e')
        .expect("scientific float format always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Evaluates the combined detector over an nx x ny grid in (x, y).
pub fn scan_grid(nx: usize, ny: usize) -> Result<DetectorGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::GridTooSmall { nx, ny });
    }
    let (w_w, w_flip) = ww_witness_pair()?;
    let mut values = vec![0.0; nx * ny];
    for ix in 0..nx {
        let x = ix as f64 / (nx - 1) as f64;
        let rho = rho_family_ww(x)?;
        let det_w = w_w.detector(&rho)?;
        let det_flip = w_flip.detector(&rho)?;
        for iy in 0..ny {
            let y = iy as f64 / (ny - 1) as f64;
            values[ix * ny + iy] = y * det_w + (1.0 - y) * det_flip;
        }
    }
    Ok(DetectorGrid { nx, ny, values })
}

/// Outcome of scanning a two-witness family against one state.
#[derive(Clone, Debug)]
pub struct Certification {
    /// Whether some combination pushed the detector below zero.
    pub certified: bool,
    /// Coefficient of `w_a` at the best combination.
    pub best_y: f64,
    pub best_detector: f64,
}

/// Scans y w_a + (1 - y) w_b over `ny` grid points of y in [0, 1] and
/// reports whether any combination detects `rho`.
pub fn certify_entangled(
    rho: &DensityMatrix,
    w_a: &Witness,
    w_b: &Witness,
    ny: usize,
) -> Result<Certification> {
    if ny < 2 {
        return Err(Error::GridTooSmall { nx: 2, ny });
    }
    let det_a = w_a.detector(rho)?;
    let det_b = w_b.detector(rho)?;
    let mut best_y = 0.0;
    let mut best_detector = det_b;
    for iy in 0..ny {
        let y = iy as f64 / (ny - 1) as f64;
        let value = y * det_a + (1.0 - y) * det_b;
        if value < best_detector {
            best_y = y;
            best_detector = value;
        }
    }
    Ok(Certification {
        certified: best_detector < -CERTIFICATION_TOL,
        best_y,
        best_detector,
    })
}

/// Upper bound on the entanglement of a mixture from one explicit
/// decomposition.
#[derive(Clone, Debug)]
pub struct DecompositionBound {
    pub weights: Vec<f64>,
    pub components: Vec<PureState>,
    /// Geometric measure of each component.
    pub per_component_e: Vec<f64>,
    /// Weighted average of the component measures.
    pub bound: f64,
    /// The same bound read off the optimal witnesses of the components.
    pub witness_form_bound: f64,
}

/// Computes sum_i p_i E(psi_i) for one decomposition, together with the
/// equivalent witness-detector form -sum_i p_i Tr(W_opt,i |psi_i><psi_i|).
///
/// Minimizing over decompositions would give the exact mixed-state measure;
/// a single decomposition only bounds it from above.
pub fn roof_upper_bound(
    weights: &[f64],
    components: &[PureState],
    config: &SolverConfig,
) -> Result<DecompositionBound> {
    if components.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if weights.len() != components.len() {
        return Err(Error::WeightCountMismatch {
            weights: weights.len(),
            states: components.len(),
        });
    }
    check_weights(weights)?;
    for psi in &components[1..] {
        components[0].shape().check_same(psi.shape())?;
    }

    let mut per_component_e = Vec::with_capacity(components.len());
    let mut bound = 0.0;
    let mut witness_form_bound = 0.0;
    for (&p, psi) in weights.iter().zip(components) {
        let solved = entanglement_eigenvalue(psi, config)?;
        let witness = Witness::structured(psi.clone(), solved.lambda_max.powi(2))?;
        per_component_e.push(solved.e_sin2);
        bound += p * solved.e_sin2;
        witness_form_bound -= p * witness.detector_pure(psi)?;
    }
    let gap = (bound - witness_form_bound).abs();
    if gap > ROOF_CONSISTENCY_TOL {
        return Err(Error::Inconsistency(format!(
            "decomposition bound routes disagree by {gap:e}"
        )));
    }
    Ok(DecompositionBound {
        weights: weights.to_vec(),
        components: components.to_vec(),
        per_component_e,
        bound,
        witness_form_bound,
    })
}
