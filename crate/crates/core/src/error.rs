use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Numeric,
    Sampling,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid law parameters: {0}")]
    InvalidLaw(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rational number detected after {} digits: {numer}/{denom}", digits.len())]
    RationalDetected {
        numer: String,
        denom: String,
        digits: Vec<u64>,
    },

    #[error("precision exhausted after {reached} iterations")]
    PrecisionExhausted { reached: u64 },

    #[error("empty conditional sample: no sampled start fell in the target set (use a larger sample or direct return sampling)")]
    EmptyConditionalSample,

    #[error("set too small for rejection sampling: {accepted} of {wanted} accepted after {draws} draws")]
    RejectionBudget {
        wanted: usize,
        accepted: usize,
        draws: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_)
            | Error::InvalidFunction(_)
            | Error::InvalidLaw(_)
            | Error::InvalidArgument(_)
            | Error::Io(_) => ErrorKind::Parse,
            Error::RationalDetected { .. } | Error::PrecisionExhausted { .. } => ErrorKind::Numeric,
            Error::EmptyConditionalSample | Error::RejectionBudget { .. } => ErrorKind::Sampling,
        }
    }
}
