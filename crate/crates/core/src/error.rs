use thiserror::Error;

/// Failures raised by the computational layers and the command line front end.
#[derive(Debug, Error)]
pub enum JetError {
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("action inconsistent: {0}")]
    ActionInconsistent(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("factorization failure: {0}")]
    FactorizationFailure(String),
    #[error("certification failure: {0}")]
    CertificationFailure(String),
    #[error("grade {grade} lies outside the sound window (window {window})")]
    UnsoundGrade { grade: usize, window: usize },
    #[error("rigidity violation: {0}")]
    RigidityViolation(String),
    #[error("exactness violation: {0}")]
    ExactnessViolation(String),
    #[error("unsupported tau: {0}")]
    UnsupportedTau(String),
    #[error("unsupported index: {0}")]
    UnsupportedIndex(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError { line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    ValidationError(String),
    #[error("report emission failed: {0}")]
    Emit(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, JetError>;
