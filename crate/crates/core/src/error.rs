use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field parameter: {0}")]
    InvalidField(String),
    #[error("ideal operation error: {0}")]
    Ideal(String),
    #[error("ray class group error: {0}")]
    RayClass(String),
    #[error("precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted { bits: u32, what: String },
    #[error("recognition ambiguous: radii too large for certified rounding ({0})")]
    Ambiguous(String),
    #[error("conjugate set is not Galois-stable: {0}")]
    NotClosed(String),
    #[error("desk-scale cap exceeded: {0}")]
    CapExceeded(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("rank-deficient data: {0}")]
    RankDeficient(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
