use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: multi-index has length {got}, algebra dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("theta matrix must be square ({rows}x{cols} given)")]
    NotSquare { rows: usize, cols: usize },

    #[error("theta is not skew-symmetric: theta[{i}][{j}] + theta[{j}][{i}] = {defect:e}")]
    NotSkewSymmetric { i: usize, j: usize, defect: f64 },

    #[error("operands live over different deformation matrices")]
    ThetaMismatch,

    #[error("symbol `{symbol}` is undefined at frequency {frequency}")]
    SymbolDomain { symbol: String, frequency: String },

    #[error("{operation} requires a mean-zero element, but the coefficient at m = 0 is {coeff}")]
    NonzeroMean { operation: String, coeff: String },

    #[error(
        "frequency {frequency} with |m| = {norm} < k = {k} present in support; \
         the circular derivative requires these removed first"
    )]
    LowFrequency { frequency: String, norm: f64, k: i32 },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("truncation window of size {size} exceeds the configured budget {budget}")]
    WindowBudget { size: usize, budget: usize },

    #[error("eigensolver failed on a {size}x{size} matrix (frobenius norm {frobenius:e}): {detail}")]
    Eigen { size: usize, frobenius: f64, detail: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
