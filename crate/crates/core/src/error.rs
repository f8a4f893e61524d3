use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in the cyclotomic field")]
    DivisionByZero,
    #[error("value is not real: its imaginary part is a nonzero field element")]
    NotReal,
    #[error("sign could not be separated from zero below the {0}-bit precision cap")]
    PrecisionCap(u32),
    #[error("precision must be at least {min} bits (got {got})")]
    PrecisionTooLow { min: u32, got: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("class is not sheaf-like: {0}")]
    NotSheafLike(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("not classifiable: {0}")]
    NotClassifiable(String),
    #[error("slope keys are not comparable: {0}")]
    NonComparable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
