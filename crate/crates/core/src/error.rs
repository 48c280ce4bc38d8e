use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: i128, m: i128 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid pair ({p},{q}): need p > q > 0 with gcd(p,q) = 1")]
    InvalidPair { p: i128, q: i128 },

    #[error("invalid singularity type: {0}")]
    InvalidType(String),

    #[error("samples do not lie on a quadratic: {0}")]
    NotQuadratic(String),

    #[error("leading coefficient ratio disagrees with the continued fraction prediction: {0}")]
    LemmaMismatch(String),

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("expected corank 1 (ambient rank {ambient}, {vectors} vectors of rank {rank})")]
    CorankMismatch {
        ambient: usize,
        vectors: usize,
        rank: usize,
    },

    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("checkpoint corrupt: {0}")]
    CheckpointCorrupt(String),

    #[error("table mismatch: {0}")]
    Mismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
