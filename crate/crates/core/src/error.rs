use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (bound {bound})")]
    OutOfRange { index: usize, bound: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),

    #[error("parameter {parameter} violates the coprimality condition: gcd = {divisor}")]
    GcdViolation { parameter: String, divisor: usize },

    #[error("dimension must be odd, got {0}")]
    EvenDimension(usize),

    #[error("{m} is not a valid period for order {d} (need m > 1 dividing d)")]
    BadDivisor { m: usize, d: usize },

    #[error("subset enumeration cap of {cap} exceeded")]
    CapExceeded { cap: u64 },

    #[error("row selection is not full spark; dependent columns {witness:?}")]
    NotFullSpark { witness: Vec<usize> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inconsistent samples: {0}")]
    InvalidSamples(String),

    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),
}
