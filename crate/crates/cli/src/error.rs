use std::path::PathBuf;

use qrnet_core::ingest::IngestError;
use thiserror::Error;

use crate::fetch::FetchError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_NETWORK: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Input {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] IngestError),
    #[error("{0}")]
    NotConverged(String),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("report {path}: {message}")]
    Report { path: PathBuf, message: String },
    #[error("{0}")]
    Analysis(String),
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input { .. } | CliError::Report { .. } => EXIT_USAGE,
            CliError::Parse(IngestError::Io(_)) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::NotConverged(_) => EXIT_NOT_CONVERGED,
            CliError::Fetch(FetchError::InvalidSlug(_)) => EXIT_USAGE,
            CliError::Fetch(FetchError::Io { .. }) => EXIT_OTHER,
            CliError::Fetch(_) => EXIT_NETWORK,
            CliError::Output { .. } | CliError::Analysis(_) => EXIT_OTHER,
        }
    }
}
