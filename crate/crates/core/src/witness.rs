//! Entanglement witnesses built from the geometric measure.
//!
//! For an entangled |psi> with entanglement eigenvalue Lambda_max, the
//! one-parameter family
//!
//! ```text
//! W = lambda2 * 1 - |psi><psi|,    Lambda_max^2 <= lambda2 < 1
//! ```
//!
//! is a witness: Tr(W sigma) >= 0 for every separable sigma (condition (i),
//! tight at lambda2 = Lambda_max^2) while Tr(W |psi><psi|) = lambda2 - 1 < 0,
//! so W detects |psi> itself (condition (ii)). The optimal member uses
//! lambda2 = Lambda_max^2, where the detector value on |psi> equals minus
//! the geometric measure.

use std::fmt;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::random_product_state;
use crate::solver::{entanglement_eigenvalue, SolverConfig};
use crate::state::{
    DensityMatrix, PartyShape, ProductState, PureState, StateDocument, CONSTRUCTION_TOL,
    DENSITY_DIMENSION_CAP, SPECTRAL_TOL,
};

/// Slack allowed below lambda2_max when validating the witness window, and
/// below zero when judging sampled detector values.
pub const WINDOW_SLACK: f64 = 1e-9;

/// Observable whose sign separates |psi>-like states from separable ones.
#[derive(Clone, Debug)]
pub enum WitnessForm {
    /// lambda2 * 1 - |psi><psi|, stored implicitly.
    Structured { lambda2: f64, psi: PureState },
    /// An arbitrary Hermitian matrix.
    General { matrix: DMatrix<Complex64> },
}

#[derive(Clone, Debug)]
pub struct Witness {
    shape: PartyShape,
    form: WitnessForm,
}

impl Witness {
    /// Wraps the structured form. Requires lambda2 in [0, 1]; the strict
    /// upper end of the witness window is enforced by [`make_witness`],
    /// not here, so that candidate witnesses read from files can still be
    /// examined and the degenerate lambda2 = 1 case (a product |psi|) can
    /// be represented.
    pub fn structured(psi: PureState, lambda2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda2) || !lambda2.is_finite() {
            return Err(Error::Lambda2OutOfRange { lambda2 });
        }
        Ok(Self {
            shape: psi.shape().clone(),
            form: WitnessForm::Structured { lambda2, psi },
        })
    }

    /// Wraps an explicit Hermitian matrix.
    pub fn general(shape: PartyShape, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = shape.total_dim();
        if d > DENSITY_DIMENSION_CAP {
            return Err(Error::DimensionCapExceeded {
                total: d,
                cap: DENSITY_DIMENSION_CAP,
            });
        }
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::MatrixSizeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                expected: d,
            });
        }
        let mut deviation = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if deviation > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            shape,
            form: WitnessForm::General { matrix },
        })
    }

    pub fn shape(&self) -> &PartyShape {
        &self.shape
    }

    pub fn form(&self) -> &WitnessForm {
        &self.form
    }

    /// lambda2 of the structured form, if this is one.
    pub fn lambda2(&self) -> Option<f64> {
        match &self.form {
            WitnessForm::Structured { lambda2, .. } => Some(*lambda2),
            WitnessForm::General { .. } => None,
        }
    }

    /// Dense matrix of the witness.
    pub fn materialize(&self) -> Result<DMatrix<Complex64>> {
        match &self.form {
            WitnessForm::Structured { lambda2, psi } => {
                let d = self.shape.total_dim();
                if d > DENSITY_DIMENSION_CAP {
                    return Err(Error::DimensionCapExceeded {
                        total: d,
                        cap: DENSITY_DIMENSION_CAP,
                    });
                }
                let a = psi.amplitudes();
                let l = Complex64::new(*lambda2, 0.0);
                Ok(DMatrix::from_fn(d, d, |i, j| {
                    let id = if i == j { l } else { Complex64::ZERO };
                    id - a[i] * a[j].conj()
                }))
            }
            WitnessForm::General { matrix } => Ok(matrix.clone()),
        }
    }

    /// Detector value Tr(W rho).
    pub fn detector(&self, rho: &DensityMatrix) -> Result<f64> {
        self.shape.check_same(rho.shape())?;
        match &self.form {
            WitnessForm::Structured { lambda2, psi } => Ok(lambda2 - rho.expectation(psi)?),
            WitnessForm::General { matrix } => {
                let mut acc = Complex64::ZERO;
                let d = self.shape.total_dim();
                for i in 0..d {
                    for j in 0..d {
                        acc += matrix[(i, j)] * rho.matrix()[(j, i)];
                    }
                }
                debug_assert!(acc.im.abs() < SPECTRAL_TOL);
                Ok(acc.re)
            }
        }
    }

    /// Detector value <phi|W|phi> on a pure state.
    pub fn detector_pure(&self, phi: &PureState) -> Result<f64> {
        self.shape.check_same(phi.shape())?;
        match &self.form {
            WitnessForm::Structured { lambda2, psi } => {
                Ok(lambda2 - psi.overlap(phi)?.norm_sqr())
            }
            WitnessForm::General { matrix } => {
                let a = phi.amplitudes();
                let mut acc = Complex64::ZERO;
                for i in 0..a.len() {
                    for j in 0..a.len() {
                        acc += a[i].conj() * matrix[(i, j)] * a[j];
                    }
                }
                debug_assert!(acc.im.abs() < SPECTRAL_TOL);
                Ok(acc.re)
            }
        }
    }

    /// Detector value on a product state, contracted without expansion
    /// when the witness is structured.
    pub fn detector_product(&self, phi: &ProductState) -> Result<f64> {
        match &self.form {
            WitnessForm::Structured { lambda2, psi } => {
                self.shape.check_same(phi.shape())?;
                Ok(lambda2 - phi.overlap(psi)?.norm_sqr())
            }
            WitnessForm::General { .. } => self.detector_pure(&phi.expand()),
        }
    }
}

/// Builds lambda2 * 1 - |psi><psi| after checking the witness window
/// lambda2_max <= lambda2 < 1 (with [`WINDOW_SLACK`] below the lower end).
pub fn make_witness(psi: &PureState, lambda2: f64, lambda_max2: f64) -> Result<Witness> {
    if !lambda2.is_finite() || lambda2 < lambda_max2 - WINDOW_SLACK {
        return Err(Error::WindowBelow {
            lambda2,
            lambda_max2,
        });
    }
    if lambda2 >= 1.0 {
        return Err(Error::WindowAbove { lambda2 });
    }
    Witness::structured(psi.clone(), lambda2.max(0.0))
}

/// Builds the optimal member of the witness family for |psi>: lambda2 sits
/// at the solved entanglement eigenvalue squared, the tight end of the
/// window.
pub fn optimal_witness(psi: &PureState, config: &SolverConfig) -> Result<Witness> {
    let result = entanglement_eigenvalue(psi, config)?;
    Witness::structured(psi.clone(), result.lambda_max.powi(2))
}

/// Evaluates both sides of the identity relating the optimal witness to the
/// geometric measure: Tr(W_opt |psi><psi|) = -E(psi). Returns (lhs, rhs).
pub fn min_detector_identity_check(psi: &PureState, config: &SolverConfig) -> Result<(f64, f64)> {
    let result = entanglement_eigenvalue(psi, config)?;
    let witness = Witness::structured(psi.clone(), result.lambda_max.powi(2))?;
    let lhs = witness.detector_pure(psi)?;
    Ok((lhs, -result.e_sin2))
}

/// Verdict of a sampled witness check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No sampled product state went negative and the target was detected.
    Consistent,
    /// Some sampled product state had a significantly negative detector.
    ViolatesConditionI,
    /// The detector on the target state was not negative.
    FailsConditionII,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Consistent => write!(f, "consistent"),
            Verdict::ViolatesConditionI => write!(f, "violates condition (i)"),
            Verdict::FailsConditionII => write!(f, "fails condition (ii)"),
        }
    }
}

/// Result of sampling the detector over random product states and
/// evaluating it on a target state.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub samples: usize,
    /// Smallest detector value over all sampled product states.
    pub min_detector: f64,
    /// The sampled product state attaining the minimum.
    pub argmin: ProductState,
    /// Detector value on the target state.
    pub target_detector: f64,
    pub verdict: Verdict,
}

/// Samples condition (i) over Haar-random product states and checks
/// condition (ii) on the target.
pub fn verify_conditions(
    witness: &Witness,
    target: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "samples",
            value: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_detector = f64::MAX;
    let mut argmin = None;
    for _ in 0..samples {
        let phi = random_product_state(witness.shape(), &mut rng);
        let value = witness.detector_product(&phi)?;
        if value < min_detector {
            min_detector = value;
            argmin = Some(phi);
        }
    }
    let argmin = argmin.expect("at least one sample was drawn");
    let target_detector = witness.detector(target)?;
    let verdict = if min_detector < -WINDOW_SLACK {
        Verdict::ViolatesConditionI
    } else if target_detector < 0.0 {
        Verdict::Consistent
    } else {
        Verdict::FailsConditionII
    };
    Ok(VerificationReport {
        samples,
        min_detector,
        argmin,
        target_detector,
        verdict,
    })
}

/// Serializable form of a structured witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub lambda2: f64,
    pub psi: StateDocument,
}

impl WitnessDocument {
    pub fn from_witness(witness: &Witness) -> Result<Self> {
        match &witness.form {
            WitnessForm::Structured { lambda2, psi } => Ok(Self {
                lambda2: *lambda2,
                psi: StateDocument::from_state(psi),
            }),
            WitnessForm::General { .. } => Err(Error::StructuredWitnessRequired),
        }
    }

    pub fn into_witness(self) -> Result<Witness> {
        Witness::structured(self.psi.into_state()?, self.lambda2)
    }
}

/// Loads a structured witness from a JSON file.
pub fn read_witness_file(path: impl AsRef<Path>) -> Result<Witness> {
    let text = fs::read_to_string(path)?;
    let doc: WitnessDocument = serde_json::from_str(&text)?;
    doc.into_witness()
}

/// Writes a structured witness as pretty-printed JSON.
pub fn write_witness_file(path: impl AsRef<Path>, witness: &Witness) -> Result<()> {
    let doc = WitnessDocument::from_witness(witness)?;
    let text = serde_json::to_string_pretty(&doc)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{dicke, ghz, w};

    #[test]
    fn window_is_enforced() {
        let wst = w(3).unwrap();
        let lm2 = 4.0 / 9.0;
        assert!(make_witness(&wst, lm2, lm2).is_ok());
        assert!(make_witness(&wst, 0.7, lm2).is_ok());
        assert!(make_witness(&wst, lm2 - 1e-10, lm2).is_ok());
        assert!(matches!(
            make_witness(&wst, 0.3, lm2),
            Err(Error::WindowBelow { .. })
        ));
        assert!(matches!(
            make_witness(&wst, 1.0, lm2),
            Err(Error::WindowAbove { .. })
        ));
        assert!(matches!(
            make_witness(&wst, 1.2, lm2),
            Err(Error::WindowAbove { .. })
        ));
    }

    #[test]
    fn ghz_witness_detector_values() {
        let g = ghz(3).unwrap();
        let witness = make_witness(&g, 0.5, 0.5).unwrap();

        let on_self = witness.detector(&DensityMatrix::from_pure(&g).unwrap()).unwrap();
        assert!((on_self + 0.5).abs() < 1e-14);

        // <GHZ|W_3> = 0, so the detector on the W_3 projector is lambda2.
        let on_w = witness
            .detector(&DensityMatrix::from_pure(&w(3).unwrap()).unwrap())
            .unwrap();
        assert!((on_w - 0.5).abs() < 1e-14);

        let mixed = DensityMatrix::maximally_mixed(g.shape().clone()).unwrap();
        assert!((witness.detector(&mixed).unwrap() - (0.5 - 0.125)).abs() < 1e-14);
    }

    #[test]
    fn w_witness_detects_w_but_not_its_flip() {
        let wst = w(3).unwrap();
        let flipped = dicke(3, 2).unwrap();
        let witness = make_witness(&wst, 4.0 / 9.0, 4.0 / 9.0).unwrap();

        let on_w = witness.detector(&DensityMatrix::from_pure(&wst).unwrap()).unwrap();
        assert!((on_w + 5.0 / 9.0).abs() < 1e-14);

        let on_flip = witness
            .detector(&DensityMatrix::from_pure(&flipped).unwrap())
            .unwrap();
        assert!((on_flip - 4.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn structured_and_materialized_detectors_agree() {
        let g = ghz(3).unwrap();
        let structured = make_witness(&g, 0.61, 0.5).unwrap();
        let general = Witness::general(
            g.shape().clone(),
            structured.materialize().unwrap(),
        )
        .unwrap();
        let rho = DensityMatrix::from_mixture(&[0.3, 0.7], &[g, w(3).unwrap()]).unwrap();
        let a = structured.detector(&rho).unwrap();
        let b = general.detector(&rho).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn optimal_witness_identity_on_known_states() {
        let config = SolverConfig {
            restarts: 8,
            ..SolverConfig::default()
        };
        let (lhs, rhs) = min_detector_identity_check(&ghz(3).unwrap(), &config).unwrap();
        assert!((lhs + 0.5).abs() < 1e-10);
        assert!((lhs - rhs).abs() < 1e-12);

        let (lhs, rhs) = min_detector_identity_check(&w(3).unwrap(), &config).unwrap();
        assert!((lhs + 5.0 / 9.0).abs() < 1e-10);
        assert!((lhs - rhs).abs() < 1e-12);

        // Product states solve to lambda2 = 1, where both sides vanish.
        let shape = PartyShape::qubits(2).unwrap();
        let product = ProductState::basis(shape, &[1, 0]).unwrap().expand();
        let (lhs, rhs) = min_detector_identity_check(&product, &config).unwrap();
        assert!(lhs.abs() < 1e-10);
        assert!(rhs.abs() < 1e-10);
    }

    #[test]
    fn detector_on_the_state_grows_with_lambda2() {
        // Within the valid window the detector on |psi><psi| is
        // lambda2 - 1, so the optimal witness minimizes it.
        let wst = w(3).unwrap();
        let rho = DensityMatrix::from_pure(&wst).unwrap();
        let lm2 = 4.0 / 9.0;
        let mut previous = f64::NEG_INFINITY;
        for k in 0..10 {
            let lambda2 = lm2 + 0.1 * k as f64 * (1.0 - lm2);
            let value = make_witness(&wst, lambda2, lm2)
                .unwrap()
                .detector(&rho)
                .unwrap();
            assert!((value - (lambda2 - 1.0)).abs() < 1e-12);
            assert!(value > previous);
            previous = value;
        }
    }

    #[test]
    fn detector_is_linear_in_the_state() {
        let g = ghz(3).unwrap();
        let wst = w(3).unwrap();
        let witness = make_witness(&g, 0.5, 0.5).unwrap();
        let mixed = DensityMatrix::from_mixture(&[0.3, 0.7], &[g.clone(), wst.clone()]).unwrap();
        let combined = witness.detector(&mixed).unwrap();
        let separate = 0.3 * witness.detector(&DensityMatrix::from_pure(&g).unwrap()).unwrap()
            + 0.7 * witness.detector(&DensityMatrix::from_pure(&wst).unwrap()).unwrap();
        assert!((combined - separate).abs() < 1e-10);
    }

    #[test]
    fn verification_accepts_the_optimal_w_witness() {
        let wst = w(3).unwrap();
        let witness = make_witness(&wst, 4.0 / 9.0, 4.0 / 9.0).unwrap();
        let target = DensityMatrix::from_pure(&wst).unwrap();
        let report = verify_conditions(&witness, &target, 2000, 11).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert!(report.min_detector >= 0.0);
        assert!(report.min_detector < 0.2);
        assert!((report.target_detector + 5.0 / 9.0).abs() < 1e-12);
        let check = witness.detector_product(&report.argmin).unwrap();
        assert_eq!(check, report.min_detector);
    }

    #[test]
    fn verification_flags_a_lambda2_below_the_window() {
        // lambda2 = 0.1 sits far below Lambda_max^2 = 4/9, so random
        // product states frequently push the detector negative.
        let wst = w(3).unwrap();
        let witness = Witness::structured(wst.clone(), 0.1).unwrap();
        let target = DensityMatrix::from_pure(&wst).unwrap();
        let report = verify_conditions(&witness, &target, 2000, 12).unwrap();
        assert_eq!(report.verdict, Verdict::ViolatesConditionI);
        assert!(report.min_detector < -1e-3);
    }

    #[test]
    fn verification_flags_a_missed_target() {
        let wst = w(3).unwrap();
        let witness = make_witness(&wst, 4.0 / 9.0, 4.0 / 9.0).unwrap();
        let target = DensityMatrix::from_pure(&dicke(3, 2).unwrap()).unwrap();
        let report = verify_conditions(&witness, &target, 500, 13).unwrap();
        assert_eq!(report.verdict, Verdict::FailsConditionII);
        assert!((report.target_detector - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn witness_file_round_trip() {
        let dir = std::env::temp_dir().join("gme-core-witness-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w3.json");
        let witness = make_witness(&w(3).unwrap(), 4.0 / 9.0, 4.0 / 9.0).unwrap();
        write_witness_file(&path, &witness).unwrap();
        let back = read_witness_file(&path).unwrap();
        assert_eq!(back.lambda2(), Some(4.0 / 9.0));
        let target = DensityMatrix::from_pure(&w(3).unwrap()).unwrap();
        assert!(
            (back.detector(&target).unwrap() - witness.detector(&target).unwrap()).abs() < 1e-15
        );
        fs::remove_file(&path).unwrap();
    }
}
