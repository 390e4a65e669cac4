use thiserror::Error;

/// Errors raised by the arithmetic and approximation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("value cannot be determined at the available precision")]
    UndeterminedToPrecision,
    #[error("insufficient trusted continued-fraction terms: need {needed}, have {available}")]
    InsufficientTrust { needed: usize, available: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("input has a certified rational slope")]
    RationalSlopeInput,
    #[error("input is rational; the quantity is undefined")]
    RationalInput,
    #[error("k = {0} is too small for the construction to apply")]
    KTooSmall(usize),
    #[error("strategy not applicable: {0}")]
    StrategyInapplicable(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("search space too large: {size} exceeds limit {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("approximating-function table exhausted at step {0}")]
    TableExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn trust(needed: usize, available: usize) -> Self {
        Error::InsufficientTrust { needed, available }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::PreconditionViolated(msg.into())
    }
}
