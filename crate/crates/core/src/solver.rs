//! Entanglement eigenvalue via alternating power iteration.
//!
//! For a pure state |psi> the entanglement eigenvalue is
//!
//! ```text
//! Lambda_max = max_phi |<phi|psi>|
//! ```
//!
//! over fully product states |phi> = |c_1> x ... x |c_n>, and the geometric
//! measure is E = 1 - Lambda_max^2. Stationary points of the overlap
//! satisfy one equation per party,
//!
//! ```text
//! v_i = g c_i,    v_i[p] = sum over amplitudes with party i fixed at p of
//!                          chi * prod_{j != i} conj(c_j[p_j]),
//! ```
//!
//! with a common factor g = <c_i, v_i> = <phi|psi>. The solver sweeps over
//! parties, replacing c_i by v_i / |v_i|; each replacement maximizes the
//! overlap in that party alone, so |<phi|psi>| is nondecreasing across
//! sweeps and converges to a stationary value. Random restarts guard
//! against landing on a stationary point that is not the global maximum.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::random_product_state;
use crate::state::{ProductState, PureState};

/// Default convergence tolerance on the overlap increase per sweep.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default cap on the number of full sweeps.
pub const DEFAULT_MAX_ITERS: usize = 1000;

/// Default number of random restarts (used in addition to one
/// deterministic start).
pub const DEFAULT_RESTARTS: usize = 32;

/// Default seed for the restart generator.
pub const DEFAULT_SEED: u64 = 1729;

/// Two starts are counted as agreeing when their eigenvalues are this close.
const AGREEMENT_TOL: f64 = 1e-8;

/// Tuning knobs for the power iteration.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Stop once the overlap increases by less than this per sweep and the
    /// stationarity residual falls below it.
    pub tol: f64,
    /// Maximum number of full sweeps per start.
    pub max_iters: usize,
    /// Number of random starts beyond the deterministic one.
    pub restarts: usize,
    /// Seed for the restart generator.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidSolverConfig("tol must be positive and finite"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidSolverConfig("max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of a single power iteration run.
#[derive(Clone, Debug)]
pub struct PowerIterationResult {
    /// Final overlap |<phi|psi>|.
    pub lambda: f64,
    /// Product state reached by the iteration.
    pub product: ProductState,
    /// Number of full sweeps performed.
    pub iterations: usize,
    /// Whether the stopping criterion was met before `max_iters`.
    pub converged: bool,
    /// Overlap after each sweep.
    pub lambda_history: Vec<f64>,
}

/// Best stationary point found over all starts.
#[derive(Clone, Debug)]
pub struct GmeResult {
    /// Largest overlap found, Lambda_max.
    pub lambda_max: f64,
    /// Geometric measure 1 - Lambda_max^2.
    pub e_sin2: f64,
    /// Closest product state found.
    pub closest: ProductState,
    /// Sweeps used by the winning start.
    pub iterations: usize,
    /// Whether the winning start converged.
    pub converged: bool,
    /// Number of starts whose eigenvalue matches the best one.
    pub starts_agreeing: usize,
}

/// Environment vector of one party: the state contracted against the
/// conjugated factors of all other parties.
fn environment(psi: &PureState, factors: &[Vec<Complex64>], party: usize) -> Vec<Complex64> {
    let dims = psi.shape().dims();
    let mut v = vec![Complex64::ZERO; dims[party]];
    for (flat, &amp) in psi.amplitudes().iter().enumerate() {
        if amp == Complex64::ZERO {
            continue;
        }
        let mut term = amp;
        let mut slot = 0;
        let mut rest = flat;
        for j in (0..dims.len()).rev() {
            let p = rest % dims[j];
            rest /= dims[j];
            if j == party {
                slot = p;
            } else {
                term *= factors[j][p].conj();
            }
        }
        v[slot] += term;
    }
    v
}

/// Largest deviation |v_i - g c_i| over parties, with g = <phi|psi>.
///
/// This vanishes exactly at stationary points of the overlap, regardless of
/// the phase conventions of the factors.
pub fn stationarity_residual(psi: &PureState, phi: &ProductState) -> Result<f64> {
    psi.shape().check_same(phi.shape())?;
    let g = phi.overlap(psi)?;
    let mut worst = 0.0f64;
    for party in 0..phi.shape().party_count() {
        let v = environment(psi, phi.factors(), party);
        let sum_sqr: f64 = phi
            .factor(party)
            .iter()
            .zip(&v)
            .map(|(&c, &vp)| (vp - g * c).norm_sqr())
            .sum();
        worst = worst.max(sum_sqr.sqrt());
    }
    Ok(worst)
}

/// Runs alternating sweeps from one starting product state.
pub fn power_iterate(
    psi: &PureState,
    start: &ProductState,
    config: &SolverConfig,
) -> Result<PowerIterationResult> {
    config.validate()?;
    psi.shape().check_same(start.shape())?;
    let shape = psi.shape().clone();
    let parties = shape.party_count();

    let mut factors: Vec<Vec<Complex64>> = start.factors().to_vec();
    let mut lambda_prev = start.overlap(psi)?.norm();
    let mut lambda_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    for _ in 0..config.max_iters {
        let mut lambda = lambda_prev;
        // Largest pre-update deviation |v_i - <c_i, v_i> c_i| seen in this
        // sweep. It bounds how stationary the incoming factors were, so
        // requiring it below tol makes converged results genuine fixed
        // points, not just plateaus of the overlap.
        let mut residual = 0.0f64;
        for party in 0..parties {
            let mut v = environment(psi, &factors, party);
            let g: Complex64 = factors[party]
                .iter()
                .zip(&v)
                .map(|(&c, &vp)| c.conj() * vp)
                .sum();
            let deviation: f64 = factors[party]
                .iter()
                .zip(&v)
                .map(|(&c, &vp)| (vp - g * c).norm_sqr())
                .sum::<f64>()
                .sqrt();
            residual = residual.max(deviation);
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            lambda = norm;
            if norm > 0.0 {
                for c in &mut v {
                    *c /= norm;
                }
                crate::state::gauge_fix_vector(&mut v);
                factors[party] = v;
            }
        }
        iterations += 1;
        debug_assert!(
            lambda >= lambda_prev - 1e-12,
            "sweep decreased the overlap: {lambda} < {lambda_prev}"
        );
        lambda_history.push(lambda);
        let delta = (lambda - lambda_prev).abs();
        lambda_prev = lambda;
        if delta <= config.tol && residual <= config.tol {
            converged = true;
            break;
        }
    }

    let product = ProductState::new(shape, factors)?;
    let lambda = product.overlap(psi)?.norm().min(1.0);
    Ok(PowerIterationResult {
        lambda,
        product,
        iterations,
        converged,
        lambda_history,
    })
}

/// Product basis state at the largest amplitude of |psi|, a cheap start
/// that is already optimal for several common families.
fn dominant_basis_start(psi: &PureState) -> ProductState {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (flat, a) in psi.amplitudes().iter().enumerate() {
        let m = a.norm_sqr();
        if m > best_mod {
            best_mod = m;
            best = flat;
        }
    }
    let levels = psi.shape().multi_index(best);
    ProductState::basis(psi.shape().clone(), &levels).expect("levels come from a valid index")
}

/// Finds the entanglement eigenvalue by running the power iteration from a
/// deterministic start plus `config.restarts` random ones.
///
/// Starts are generated sequentially from a generator seeded with
/// `config.seed` and then iterated in parallel; ties between equally good
/// outcomes are broken toward the earliest start, so results are
/// reproducible for a fixed configuration.
pub fn entanglement_eigenvalue(psi: &PureState, config: &SolverConfig) -> Result<GmeResult> {
    config.validate()?;
    let mut starts = Vec::with_capacity(config.restarts + 1);
    starts.push(dominant_basis_start(psi));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        starts.push(random_product_state(psi.shape(), &mut rng));
    }

    let outcomes: Vec<PowerIterationResult> = starts
        .par_iter()
        .map(|start| power_iterate(psi, start, config))
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, outcome) in outcomes.iter().enumerate() {
        if outcome.lambda > outcomes[best].lambda {
            best = i;
        }
    }
    let top = &outcomes[best];
    let starts_agreeing = outcomes
        .iter()
        .filter(|o| (o.lambda - top.lambda).abs() <= AGREEMENT_TOL)
        .count();

    let lambda_max = top.lambda;
    Ok(GmeResult {
        lambda_max,
        e_sin2: (1.0 - lambda_max * lambda_max).max(0.0),
        closest: top.product.clone(),
        iterations: top.iterations,
        converged: top.converged,
        starts_agreeing,
    })
}

/// Geometric measure of entanglement 1 - Lambda_max^2.
pub fn gme(psi: &PureState, config: &SolverConfig) -> Result<f64> {
    Ok(entanglement_eigenvalue(psi, config)?.e_sin2)
}

/// Exact entanglement eigenvalue of a bipartite state: the largest singular
/// value of the amplitude matrix.
pub fn schmidt_lambda(psi: &PureState) -> Result<f64> {
    let shape = psi.shape();
    if shape.party_count() != 2 {
        return Err(Error::BipartiteOnly {
            parties: shape.party_count(),
        });
    }
    let (d0, d1) = (shape.dim(0), shape.dim(1));
    let m = nalgebra::DMatrix::from_fn(d0, d1, |i, j| psi.amplitudes()[i * d1 + j]);
    let singular = m.singular_values();
    Ok(singular.iter().copied().fold(0.0, f64::max).min(1.0))
}

/// Lower bound on the entanglement eigenvalue of a small qubit state by
/// exhaustive search over a Bloch angle grid.
///
/// All parties but the last are swept over a `points x points` grid in the
/// polar and azimuthal angles; the last party is maximized exactly through
/// its environment vector. Supports 2 or 3 qubits and at least 8 grid
/// points per angle.
pub fn brute_force_lambda(psi: &PureState, points: usize) -> Result<f64> {
    let shape = psi.shape();
    let parties = shape.party_count();
    if shape.dims().iter().any(|&d| d != 2) || !(2..=3).contains(&parties) {
        return Err(Error::UnsupportedShape(format!(
            "grid search handles 2 or 3 qubits, got dims {:?}",
            shape.dims()
        )));
    }
    if points < 8 {
        return Err(Error::ParameterOutOfRange {
            name: "points",
            value: points as f64,
        });
    }

    let mut candidates = Vec::with_capacity(points * points);
    for ti in 0..points {
        let theta = std::f64::consts::PI * ti as f64 / (points - 1) as f64;
        let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        for pi in 0..points {
            let phi = 2.0 * std::f64::consts::PI * pi as f64 / points as f64;
            candidates.push([
                Complex64::new(ct, 0.0),
                Complex64::from_polar(st, phi),
            ]);
        }
    }

    let chi = psi.amplitudes();
    let best = match parties {
        2 => candidates
            .par_iter()
            .map(|c1| {
                let mut v = [Complex64::ZERO; 2];
                for p0 in 0..2 {
                    for p1 in 0..2 {
                        v[p0] += chi[2 * p0 + p1] * c1[p1].conj();
                    }
                }
                (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
            })
            .reduce(|| 0.0, f64::max),
        _ => candidates
            .par_iter()
            .map(|c1| {
                let mut best = 0.0f64;
                for c2 in &candidates {
                    let mut v = [Complex64::ZERO; 2];
                    for p0 in 0..2 {
                        for p1 in 0..2 {
                            let w = c1[p1].conj();
                            for p2 in 0..2 {
                                v[p0] += chi[4 * p0 + 2 * p1 + p2] * w * c2[p2].conj();
                            }
                        }
                    }
                    best = best.max((v[0].norm_sqr() + v[1].norm_sqr()).sqrt());
                }
                best
            })
            .reduce(|| 0.0, f64::max),
    };
    Ok(best.min(1.0))
}
