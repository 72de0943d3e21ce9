use thiserror::Error;

/// Errors raised by the solvers.
///
/// Payloads are stored as `f64` regardless of the scalar type the failing
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge: estimate {estimate:e} with error {error:e} after {subdivisions} subdivisions"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("predicate has the same value at both ends of [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("hypergeometric series with a = {a} does not terminate")]
    InvalidDegree { a: i64 },

    #[error("invalid quantum numbers n = {n}, l = {l}: need n >= 1 and 0 <= l <= n - 1")]
    InvalidQuantumNumbers { n: u32, l: u32 },

    #[error("invalid coupling {0}: must be positive and finite")]
    InvalidCoupling(f64),

    #[error("invalid masses m1 = {m1}, m2 = {m2}: both must be positive and finite")]
    InvalidMasses { m1: f64, m2: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no bound state (n = {n}, l = {l}) at alphaZ = {alpha_z}")]
    NoBoundState { n: u32, l: u32, alpha_z: f64 },

    #[error("Klein-Gordon level (n = {n}, l = {l}) does not exist at alphaZ = {alpha_z}")]
    BeyondCriticalCoupling { n: u32, l: u32, alpha_z: f64 },

    #[error("density integrates to {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("angular coefficients are singular at epsilon = 1")]
    DegenerateEpsilon,

    #[error("no eigenvalue with {nodes} nodes found in energy window [{lo:e}, {hi:e}]")]
    EigenvalueNotBracketed { nodes: u32, lo: f64, hi: f64 },

    #[error("radial grid too short: |chi| near r_max is {tail:e} of its peak")]
    GridTooSmall { tail: f64 },

    #[error("invalid radial grid: {0}")]
    InvalidGrid(String),

    #[error("self-consistent iteration failed after {iterations} iterations: {reason}")]
    IterationDiverged { iterations: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
