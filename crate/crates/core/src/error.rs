use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigenvalue clustering is order-dependent: cluster spans {span:.3e} > {epsilon:.3e}")]
    DegenerateClustering { span: f64, epsilon: f64 },

    #[error("invalid spectral data: {0}")]
    InvalidSpectralData(String),

    #[error("eigenvalue index {index} out of range for a spectrum of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),

    #[error("sieves live on different bases or modes")]
    BaseMismatch,

    #[error("spectrum of size {0} is too large for exhaustive partition enumeration")]
    SpectrumTooLarge(usize),

    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("family admits a global section; nothing to minimize")]
    StillColorable,

    #[error("inconsistent partial valuation: {0}")]
    InconsistentValuation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
