use thiserror::Error;

/// Errors raised by sequence generation, exact search, and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("{what}: requested {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("estimated memory {needed} bytes exceeds the budget of {budget} bytes")]
    OutOfMemory { needed: u64, budget: u64 },

    #[error("target out of reach: {0}")]
    RangeUnreachable(String),

    #[error("truncation diverged: {0}")]
    DivergedTruncation(String),

    #[error("truncation failed: {0}")]
    TruncationFailure(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_) | Error::InvalidInput(_) | Error::RangeUnreachable(_) => 2,
            Error::Overflow(_) | Error::CapExceeded { .. } | Error::OutOfMemory { .. } => 3,
            Error::DivergedTruncation(_) | Error::TruncationFailure(_) => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
