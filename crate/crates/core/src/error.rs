use thiserror::Error;

/// Crate-wide error type. Variants map onto the three process exit
/// classes used by the CLI: validation (1), capacity (2), numeric (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate state label \"{0}\"")]
    DuplicateState(String),

    #[error("malformed problem entry: {0}")]
    MalformedEntry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("encoding error: {0}")]
    EncodingError(String),

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("chain is not ergodic: {0}")]
    NotErgodic(String),

    #[error("dimension mismatch: {0}")]
    DimensionError(String),

    #[error("no finite TTS entry in curve")]
    NoSolutionSignal,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit status class for command-line use.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::CapacityExceeded(_) => 2,
            Error::NotErgodic(_)
            | Error::NoSolutionSignal
            | Error::DegenerateFit(_)
            | Error::NumericInstability(_) => 3,
            _ => 1,
        }
    }
}
