use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series exponential needs a zero constant term")]
    NonzeroConstantTerm,

    #[error("series divisor has a zero constant term")]
    ZeroConstantTerm,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {requested} exceeds limit {limit}; {hint}")]
    LimitExceeded {
        requested: u64,
        limit: u64,
        hint: &'static str,
    },

    #[error("{what} needs at least {required} bits of precision (have {have})")]
    PrecisionTooLow {
        what: String,
        required: u32,
        have: u32,
    },

    #[error("tail bound {bound:e} exceeds requested accuracy {requested:e}; {hint}")]
    TailBudget {
        bound: f64,
        requested: f64,
        hint: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("missing constant: {0}")]
    MissingConstant(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
