use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("support value must be a finite nonnegative number, got {0}")]
    NegativeValue(f64),
    #[error("probability mass must be positive and finite, got {0}")]
    NonPositiveMass(f64),
    #[error("total probability mass {0} exceeds 1")]
    MassExceedsOne(f64),
    #[error("values and masses have different lengths ({values} vs {masses})")]
    LengthMismatch { values: usize, masses: usize },
    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("quantile fraction must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("h must be at least 1")]
    InvalidH,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("duplicate candidate id: {0}")]
    DuplicateId(String),
    #[error("unknown candidate id: {0}")]
    UnknownCandidate(String),
    #[error("outcome index {index} out of range ({len} outcomes)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("outcome {outcome} assigns {got} values but the ensemble has {want} candidates")]
    AssignmentLength {
        outcome: usize,
        got: usize,
        want: usize,
    },
    #[error("outcome probabilities sum to {0}, expected 1")]
    BadProbabilitySum(f64),
    #[error("search space of {0} exceeds budget {1}")]
    BudgetExceeded(u128, u128),
    #[error("candidate {0} is not weighted Bernoulli (more than one positive support value)")]
    NotWeightedBernoulli(String),
    #[error("set cover universe is empty")]
    EmptyUniverse,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
