use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolantError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("arity {arity} exceeds the arity cap {cap}")]
    ArityCap { arity: usize, cap: usize },
    #[error("arity {arity} needs {expected} values, got {got}")]
    LengthMismatch {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("duplicate variable index {0}")]
    DuplicateIndex(usize),
    #[error("zero signature")]
    ZeroSignature,
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("support is not affine")]
    NotAffine,
    #[error("invalid free-variable set: {0}")]
    InvalidFreeSet(String),
    #[error("support has rank 0")]
    RankZero,
    #[error("backend mismatch")]
    BackendMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("anomaly: {0}")]
    Anomaly(String),
    #[error("malformed grid: {0}")]
    MalformedGrid(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the float backend does not issue class verdicts")]
    InexactBackend,
}

impl HolantError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            HolantError::DivisionByZero => "division-by-zero",
            HolantError::ArityCap { .. } => "arity-cap",
            HolantError::LengthMismatch { .. } => "length-mismatch",
            HolantError::IndexOutOfRange { .. } => "index-out-of-range",
            HolantError::DuplicateIndex(_) => "duplicate-index",
            HolantError::ZeroSignature => "zero-signature",
            HolantError::UnknownBuiltin(_) => "unknown-builtin",
            HolantError::NotAffine => "not-affine",
            HolantError::InvalidFreeSet(_) => "invalid-free-set",
            HolantError::RankZero => "rank-zero",
            HolantError::BackendMismatch => "backend-mismatch",
            HolantError::Precondition(_) => "precondition",
            HolantError::Anomaly(_) => "anomaly",
            HolantError::MalformedGrid(_) => "malformed-grid",
            HolantError::CapExceeded(_) => "cap-exceeded",
            HolantError::Parse(_) => "parse",
            HolantError::InexactBackend => "inexact-backend",
        }
    }
}

pub type Result<T> = std::result::Result<T, HolantError>;
