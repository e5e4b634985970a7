use thiserror::Error;

/// Errors raised by the compression primitives and audits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("norm order p must be >= 1, got {0}")]
    InvalidNorm(f64),

    #[error("shape {shape:?} holds {expected} elements but data has {actual}")]
    ShapeMismatch {
        shape: Vec<usize>,
        expected: usize,
        actual: usize,
    },

    #[error("length {len} is not divisible by {divisor} ({what})")]
    Indivisible {
        len: usize,
        divisor: usize,
        what: &'static str,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid quantization format: {0}")]
    InvalidFormat(String),

    #[error("unknown format preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid sparsity pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
