use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("element is not odd: {0}")]
    NotOdd(String),
    #[error("element is not even: {0}")]
    NotEven(String),
    #[error("element is not closed: {0}")]
    NotClosed(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid generator change: {0}")]
    InvalidChange(String),
    #[error("exponential undefined: {0}")]
    ScalarPart(String),
    #[error("operator is not a section: {0}")]
    Decomposition(String),
    #[error("builder precondition failed: {0}")]
    Precondition(String),
    #[error("nonzero residual in {what}: {residual}")]
    Residual { what: String, residual: String },
    #[error("no T-dual with this Euler class: {0}")]
    NoDual(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("transform is not invertible")]
    NotInvertible,
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
}

impl Error {
    /// Errors raised because inputs to a builder do not satisfy its recipe.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_) | Error::Residual { .. } | Error::NoDual(_) | Error::NotClosed(_) | Error::Degree(_)
        )
    }
}
