use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("valuation matrix must have at least one row")]
    Empty,

    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("negative valuation {value} at ({row}, {col})")]
    NegativeValuation { row: usize, col: usize, value: i64 },

    #[error("valuation {value} is too large for exact arithmetic at n = {n}")]
    ValueTooLarge { n: usize, value: i64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("assignment is not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("instance of size {n} exceeds the oracle limit of {max}")]
    InstanceTooLarge { n: usize, max: usize },

    #[error("utility iteration did not reach a fixed point after {sweeps} sweeps; the allocation is not optimal")]
    NonOptimalAllocation { sweeps: usize },

    #[error("pricing methods disagree on instance n = {n}, trial {trial}")]
    MethodMismatch { n: usize, trial: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
