use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid extension degree {0}")]
    BadDegree(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} is too large for table arithmetic")]
    FieldTooLarge(u64),
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("F_{{{small}}} is not a subfield of F_{{{big}}}")]
    NotSubfield { small: u64, big: u64 },
    #[error("cyclotomic operands have different primes ({0} vs {1})")]
    CycloMismatch(u32, u32),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("quiver is already a double")]
    AlreadyDoubled,
    #[error("quiver is not a double")]
    NotDoubled,
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("budget exceeded: {what} needs {needed} operations, cap is {cap}")]
    BudgetExceeded { what: String, needed: u128, cap: u128 },
    #[error("endomorphism algebra of size {size} exceeds the enumeration cap {cap}")]
    EndCapExceeded { size: u128, cap: u128 },

    #[error("series modes differ")]
    ModeMismatch,
    #[error("series cutoffs or ranks differ")]
    GradingMismatch,
    #[error("constant term must be {expected}")]
    ConstantTerm { expected: &'static str },
    #[error("value table for grade {grade:?} lacks extension degree {degree}")]
    MissingDegree { grade: Vec<u32>, degree: u32 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("interpolated polynomial has non-integer coefficient {0}")]
    NonIntegral(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
