use thiserror::Error;

/// Errors raised by the library and surfaced by the CLI and C ABI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The bosonic state needs more levels than the dense cap allows.
    #[error("near-maximal-squeezing overflow at x = {x:e}: {reason}")]
    SqueezingOverflow { x: f64, reason: String },

    #[error("no sign change of S_fermion - S_boson on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("invalid density operator: {0}")]
    InvalidOperator(String),

    #[error("statistics mismatch: expected {expected}, got {found}")]
    StatisticsMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::StatisticsMismatch { .. } => 2,
            Error::SqueezingOverflow { .. } | Error::NoSignChange { .. } => 3,
            Error::InvalidOperator(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
