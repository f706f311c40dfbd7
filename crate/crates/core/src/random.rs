//! Seeded sampling of states and unitaries.
//!
//! Uniform (Haar) samples come from the standard constructions: a complex
//! Gaussian vector normalized to the sphere, and the Q factor of a complex
//! Gaussian matrix with the QR phase ambiguity fixed by the diagonal of R.
//! All functions take the generator explicitly so callers control seeding.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::state::{PartyShape, ProductState, PureState};

/// A uniformly random unit vector in C^dim.
pub fn complex_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for c in &mut v {
                *c /= norm;
            }
            return v;
        }
    }
}

/// A product state whose factors are independent uniform unit vectors.
pub fn random_product_state<R: Rng + ?Sized>(shape: &PartyShape, rng: &mut R) -> ProductState {
    let factors = shape
        .dims()
        .iter()
        .map(|&d| complex_unit_vector(d, rng))
        .collect();
    ProductState::new(shape.clone(), factors).expect("random factors are unit vectors")
}

/// A uniformly random pure state on the full Hilbert space.
pub fn random_pure_state<R: Rng + ?Sized>(shape: &PartyShape, rng: &mut R) -> PureState {
    let amplitudes = complex_unit_vector(shape.total_dim(), rng);
    PureState::new(shape.clone(), amplitudes).expect("random amplitudes are unit vectors")
}

/// A Haar-random dim x dim unitary.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Rotating each column by the phase of the matching diagonal entry of R
    // makes the distribution independent of the QR sign conventions.
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}
