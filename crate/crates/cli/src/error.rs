use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad arguments.
    #[error("{0}")]
    Input(String),
    /// Nothing valid to report.
    #[error("{0}")]
    NoResult(String),
    /// Some groups failed; the rest were written.
    #[error("{failed} of {total} groups could not be fitted")]
    Partial { failed: usize, total: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoResult(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Partial { .. } => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Input(format!("csv: {other:?}")),
        }
    }
}

impl From<tailfit::Error> for CliError {
    fn from(e: tailfit::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
