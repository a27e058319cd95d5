use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range [{min}, {max}]")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bipartition k = {k} out of range [1, {max}] for {n} qubits")]
    BipartitionOutOfRange { n: usize, k: u64, max: u64 },

    #[error("GHZ index j = {j} out of range [0, {max}] for {n} qubits")]
    GhzIndexOutOfRange { n: usize, j: u64, max: u64 },

    #[error("qubit {qubit} out of range [1, {n}]")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("polarization alpha_{qubit} = {value} is not finite")]
    NonFinitePolarization { qubit: usize, value: f64 },

    #[error("polarization alpha_{qubit} = {value} must be strictly positive")]
    NonPositivePolarization { qubit: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1 within {tol:e}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("negative Bell-diagonal weight {value} at j = {j}")]
    NegativeWeight { j: usize, value: f64 },

    #[error("matrix is not symmetric: |m[{row},{col}] - m[{col},{row}]| = {deviation:e}")]
    NotSymmetric { row: usize, col: usize, deviation: f64 },

    #[error("matrix is not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("matrix of {len} entries is not square or not 2^N x 2^N")]
    BadMatrixShape { len: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("no sign change of the boundary residual over [{lo}, {hi}] (g(lo) = {g_lo}, g(hi) = {g_hi})")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Domain errors are caused by the caller's inputs; everything else
    /// (I/O, CSV plumbing) is an environment failure.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Csv(_))
    }
}
