//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state must have at least one party")]
    NoParties,

    #[error("party {party} has dimension {dim}, need at least 2")]
    PartyDimensionTooSmall { party: usize, dim: usize },

    #[error("total dimension {total} exceeds the supported cap {cap}")]
    DimensionCapExceeded { total: usize, cap: usize },

    #[error("amplitude vector has length {got}, shape requires {expected}")]
    AmplitudeLengthMismatch { expected: usize, got: usize },

    #[error("index {index:?} is out of bounds for dims {dims:?}")]
    IndexOutOfBounds { index: Vec<usize>, dims: Vec<usize> },

    #[error("index {index:?} has {got} entries, shape has {expected} parties")]
    IndexRankMismatch {
        index: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("index {index:?} appears more than once")]
    DuplicateIndex { index: Vec<usize> },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("factor for party {party} has length {got}, expected {expected}")]
    FactorLengthMismatch {
        party: usize,
        expected: usize,
        got: usize,
    },

    #[error("party shapes differ: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("matrix is {rows}x{cols}, shape requires {expected}x{expected}")]
    MatrixSizeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error("matrix is not Hermitian, max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("matrix is not positive semidefinite, smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumNotUnit { sum: f64 },

    #[error("got {weights} weights for {states} states")]
    WeightCountMismatch { weights: usize, states: usize },

    #[error("mixture needs at least one component")]
    EmptyMixture,

    #[error("invalid solver configuration: {0}")]
    InvalidSolverConfig(&'static str),

    #[error("power iteration did not converge within {max_iters} sweeps")]
    DidNotConverge { max_iters: usize },

    #[error("operation requires a bipartite state, got {parties} parties")]
    BipartiteOnly { parties: usize },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("parameter {name} = {value} is out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("condition (i) violated: lambda2 = {lambda2} lies below lambda2_max = {lambda_max2}")]
    WindowBelow { lambda2: f64, lambda_max2: f64 },

    #[error("condition (ii) violated: lambda2 = {lambda2} is not below 1")]
    WindowAbove { lambda2: f64 },

    #[error("lambda2 = {lambda2} is outside [0, 1]")]
    Lambda2OutOfRange { lambda2: f64 },

    #[error("witness combination requires structured parts")]
    StructuredWitnessRequired,

    #[error("grid is {nx}x{ny}, need at least 2 points per axis")]
    GridTooSmall { nx: usize, ny: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
