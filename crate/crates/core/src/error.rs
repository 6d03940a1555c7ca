use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Pauli spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at column {}: {message}", position + 1)]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max |U†U - I| = {0:.3e})")]
    NotUnitary(f64),

    #[error("spectra are incomparable: traces {0} and {1} differ")]
    Incomparable(f64, f64),

    #[error("target operator is zero")]
    ZeroTarget,

    /// `index` is the 1-based partial-sum index that rules the target out, when one exists.
    #[error("target unreachable: {reason}")]
    Unreachable { index: Option<usize>, reason: String },

    #[error("dimension {dim} exceeds the vertex-enumeration limit {max}; use birkhoff_design")]
    Capacity { dim: usize, max: usize },

    #[error("unphysical relaxation model: {0}")]
    Unphysical(String),

    #[error("fixed point is not unique: unit eigenspace has multiplicity {0}")]
    NonUniqueFixedPoint(usize),

    #[error("solver did not converge (best residual {residual:.3e})")]
    SolverFailure { residual: f64 },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
