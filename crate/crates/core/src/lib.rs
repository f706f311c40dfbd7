//! Geometric measure of entanglement for multipartite pure states.
//!
//! The crate computes the entanglement eigenvalue Lambda_max, the largest
//! overlap a state admits with any fully product state, and the derived
//! measure E = 1 - Lambda_max^2. On top of the solver it builds
//! entanglement witnesses of the form lambda2 * 1 - |psi><psi|, verifies
//! their defining conditions by sampling, and scans convex witness
//! combinations against mixed-state families.

pub mod error;
pub mod mixed;
pub mod random;
pub mod solver;
pub mod state;
pub mod witness;

pub use error::{Error, Result};
pub use solver::{GmeResult, PowerIterationResult, SolverConfig};
pub use state::{DensityMatrix, PartyShape, ProductState, PureState};
pub use witness::{Verdict, VerificationReport, Witness};
