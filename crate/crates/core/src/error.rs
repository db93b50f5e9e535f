use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by the weight-distribution engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a vector of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("block length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("prefix of length {prefix} is too long for block length {n}")]
    PrefixTooLong { prefix: usize, n: usize },

    #[error("index {index} is out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("m = {m} exceeds the limit of {limit}")]
    LengthExponentTooLarge { m: u32, limit: u32 },

    #[error("invalid code specification: {0}")]
    InvalidSpec(String),

    #[error("generator matrix has rank {rank}, expected {rows}")]
    RankDeficient { rank: usize, rows: usize },

    #[error("monomial set is not decreasing: {lower} precedes {upper} but is missing")]
    NotDecreasing { lower: String, upper: String },

    #[error("operation requires a plain spec (zero-frozen bits only)")]
    NotPlain,

    #[error("{required} cosets required, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: BigUint },

    #[error("enumeration of 2^{bits} words exceeds the oracle guard of 2^{limit}")]
    GuardExceeded { bits: usize, limit: usize },

    #[error("not the weight enumerator of a linear code: {0}")]
    NotLinearCodeEnumerator(String),

    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
