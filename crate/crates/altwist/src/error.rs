use thiserror::Error;

/// Everything that can go wrong across the crate. Variants mirror the
/// preconditions of the public operations; none of them is used for
/// "mathematically impossible" states, which panic instead (see
/// `IntegralityViolation` for the one guarded exception).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),

    #[error("discriminant {0} is not a negative quadratic discriminant")]
    InvalidDiscriminantValue(i64),

    #[error("discriminant {0} is not fundamental")]
    NonFundamentalDiscriminant(i64),

    #[error("prime {p} divides 2·{disc} (ramified or even)")]
    RamifiedPrime { p: u64, disc: i64 },

    #[error("|{disc}| exceeds the class number scan budget {budget}")]
    BudgetExceeded { disc: i64, budget: u64 },

    #[error("{m} is not an exact divisor > 1 of {d}")]
    NotExactDivisor { d: u64, m: u64 },

    #[error("invalid quaternion discriminant {d}: {reason}")]
    InvalidDiscriminant { d: u64, reason: &'static str },

    /// A genus or fixed-point identity that must hold for every valid input
    /// failed to divide exactly. Reaching this means a formula bug, never a
    /// bad input; it is surfaced as an error (CLI exit code 3) instead of a
    /// panic so batch scans fail loudly but cleanly.
    #[error("integrality violation in {context}: {numerator} is not divisible by {denominator}")]
    IntegralityViolation {
        context: &'static str,
        numerator: i128,
        denominator: i128,
    },

    #[error("invalid probability {num}/{den}")]
    InvalidProbability { num: u64, den: u64 },

    #[error("hypothesis {failing} fails for {descriptor}")]
    HypothesisFailure {
        failing: &'static str,
        descriptor: String,
    },

    #[error("variant {variant} is unsupported here: {reason}")]
    VariantUnsupported {
        variant: &'static str,
        reason: String,
    },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("certificate rejected: {0}")]
    CertificateParse(String),
}

impl Error {
    pub(crate) fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
