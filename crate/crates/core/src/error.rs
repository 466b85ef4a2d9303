use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("all-zero point")]
    AllZeroPoint,
    #[error("{op}: argument must be nonzero")]
    ZeroArgument { op: &'static str },
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("weights {0} are not well-formed")]
    NotWellFormed(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("coordinate count {got} does not match {expected} weights")]
    LengthMismatch { expected: usize, got: usize },
    #[error("scaling produces non-integral coordinates: {0}")]
    NonIntegral(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial is not weighted homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("infinite height: {0}")]
    InfiniteHeight(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Stable machine-readable code, used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::AllZeroPoint => "all-zero-point",
            Error::ZeroArgument { .. } => "zero-argument",
            Error::NotPrime(_) => "not-prime",
            Error::InvalidWeights(_) => "invalid-weights",
            Error::NotWellFormed(_) => "not-well-formed",
            Error::WeightMismatch(_) => "weight-mismatch",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::NonIntegral(_) => "non-integral",
            Error::Parse { .. } => "parse",
            Error::UnknownVariable(_) => "unknown-variable",
            Error::Inhomogeneous(_) => "inhomogeneous",
            Error::InfiniteHeight(_) => "infinite-height",
            Error::Config(_) => "config",
        }
    }

    /// Malformed user input, as opposed to a well-formed request with no answer.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UnknownVariable(_) | Error::Inhomogeneous(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
