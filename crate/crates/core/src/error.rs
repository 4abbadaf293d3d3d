use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),
    #[error("budget exceeded: {reason} (estimated size {estimate:.3e})")]
    BudgetExceeded { reason: String, estimate: f64 },
    #[error("wrong polymer class: expected {expected}, got {got}")]
    WrongClass { expected: String, got: String },
    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed polymer: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no generic projection direction found after {0} attempts")]
    NoGenericProjection(usize),
    #[error("empty ensemble")]
    EmptyEnsemble,
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("no crossing of threshold {0} on the grid")]
    NoCrossing(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
