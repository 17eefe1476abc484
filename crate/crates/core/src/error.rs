use thiserror::Error;

use crate::checkmatrix::ValidityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2 and fit in 32 bits, got {0}")]
    InvalidModulus(u64),

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },

    #[error("dimension mismatch: (D={left_d}, n={left_n}) vs (D={right_d}, n={right_n})")]
    DimensionMismatch {
        left_d: u64,
        left_n: usize,
        right_d: u64,
        right_n: usize,
    },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("{k} generators on {n} qudits exceeds the limit of 2n")]
    TooManyGenerators { k: usize, n: usize },

    #[error("at least one generator is required")]
    EmptyPresentation,

    #[error("invalid stabilizer: {0}")]
    InvalidStabilizer(ValidityReport),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("elementary operation has no gate realization: {0}")]
    UnrealizableOp(String),

    #[error("dense oracle dimension {dim} exceeds bound {bound}")]
    OracleTooLarge { dim: usize, bound: usize },

    #[error("group enumeration exceeded {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("internal error: {0}")]
    Internal(String),
}
