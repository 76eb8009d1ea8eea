use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed command line or config document.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates a domain invariant.
    #[error("validation error: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) | CliError::Io(_) => 3,
        }
    }

    /// Validation error prefixed with the offending field.
    pub fn field(path: &str, err: impl std::fmt::Display) -> Self {
        CliError::Validation(format!("{path}: {err}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<geninfo_core::Error> for CliError {
    fn from(e: geninfo_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
