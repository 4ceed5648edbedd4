use thiserror::Error;

use crate::hypotheses::Hypothesis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid center at blow-up {step}: {reason}")]
    InvalidCenter { step: usize, reason: String },
    #[error("component index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("intersection matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid invariant marking: {0}")]
    InvalidMarking(String),
    #[error("invalid branch {name}: {reason}")]
    InvalidBranch { name: String, reason: String },
    #[error("hypothesis `{0}` is required but not asserted")]
    HypothesisMissing(Hypothesis),
    #[error("hypothesis `{0}` is violated")]
    HypothesisViolated(Hypothesis),
    #[error("{quantity} is not an integer: {value}")]
    NonIntegerResult { quantity: String, value: String },
    #[error("{quantity} must be nonnegative, got {value}")]
    NegativeResult { quantity: String, value: String },
    #[error("missing reduced-singularity data for {0}")]
    MissingReducedData(String),
    #[error("invalid reduced-singularity data: {0}")]
    InvalidReducedData(String),
    #[error("exact values over different quadratic fields: sqrt({0}) and sqrt({1})")]
    IncompatibleRadicands(i64, i64),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("cannot parse exact value `{0}`")]
    ParseValue(String),
    #[error("pencil data inconsistent: {0}")]
    InconsistentPencil(String),
    #[error("{what}: {left} != {right}")]
    PathMismatch { what: String, left: String, right: String },
}
