use std::path::PathBuf;

use shapecert::error::{ComplexError, EmbedError, LcpError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        /// File name, or `<input>` for in-memory text.
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lcp(#[from] LcpError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

impl CliError {
    /// 1 for a method that ran and did not succeed, 2 for bad input or IO.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Embed(EmbedError::RestartsExhausted { .. }) => 1,
            _ => 2,
        }
    }
}
