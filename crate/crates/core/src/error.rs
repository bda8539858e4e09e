use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("parameter z must be non-zero")]
    ZeroParameter,

    #[error("Brauer parameter mismatch: element built at z = {element}, representation needs z = {expected}")]
    ParameterMismatch { element: String, expected: String },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("element is not invertible")]
    NotInvertible,

    #[error("elements do not commute: {0}")]
    NotCommuting(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
