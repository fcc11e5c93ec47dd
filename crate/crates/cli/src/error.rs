use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Fasta { path: PathBuf, msg: String },
    #[error("{path}: record {record:?}, offset {offset}: invalid symbol {symbol:?}")]
    InvalidSymbol { path: PathBuf, record: String, offset: usize, symbol: char },
    #[error(transparent)]
    Compute(#[from] asmdist::Error),
    #[error("cannot write output: {0}")]
    Output(#[source] std::io::Error),
}

impl CliError {
    /// Process exit status: 2 usage, 3 input, 4 computation, 5 output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Read { .. } | CliError::Fasta { .. } | CliError::InvalidSymbol { .. } => 3,
            CliError::Compute(_) => 4,
            CliError::Output(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}
