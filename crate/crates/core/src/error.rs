use thiserror::Error;

/// Errors produced by the reductions, oracles and file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("generator matrix is not in systematic form [I_k | R]")]
    NotSystematic,

    #[error("variable x{0} is not covered by the assignment")]
    UncoveredVariable(u32),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("witness rejected: {0}")]
    InvalidWitness(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
