use thiserror::Error;

use crate::product::guard::GuardError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state store capacity exhausted after {0} states")]
    CapacityExhausted(usize),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed automaton: {0}")]
    Malformed(String),

    #[error(transparent)]
    Guard(#[from] GuardError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot allocate {bytes} bytes for the bitstate table")]
    Resource { bytes: u64 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
