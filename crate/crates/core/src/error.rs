use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("chaotic orbit diverged at iteration {iteration} (|value| = {magnitude:e})")]
    Divergence { iteration: usize, magnitude: f64 },

    #[error("imaginary component drifted to {magnitude:e} at iteration {iteration}")]
    ImaginaryDrift { iteration: usize, magnitude: f64 },

    #[error("key sequence too short: need {needed} values, have {available}")]
    InsufficientSequence { needed: usize, available: usize },

    #[error("not a permutation of 0..8: {0:?}")]
    InvalidPermutation([u8; 8]),

    #[error("invalid DNA rule index {0} (expected 1..=8)")]
    InvalidRule(u8),

    #[error("state is not a computational basis state (largest |amplitude| = {max_magnitude})")]
    NondeterministicState { max_magnitude: f64 },

    #[error("key parse error in field `{field}`: {reason}")]
    KeyParse { field: String, reason: String },

    #[error("key field `{field}` out of range: {reason}")]
    KeyRange { field: String, reason: String },

    #[error("zero variance along {0}; correlation undefined")]
    ZeroVariance(&'static str),

    #[error("empty parameter range")]
    EmptyRange,
}
