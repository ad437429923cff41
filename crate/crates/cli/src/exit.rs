use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments (exit 2).
    Usage(String),
    /// Verification mismatch (exit 4).
    Verification(String),
    /// Anything else (exit 1).
    Failure(anyhow::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 4,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Failure(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<slopes_core::Error> for CliError {
    fn from(e: slopes_core::Error) -> Self {
        match e {
            slopes_core::Error::Domain(m) => CliError::Usage(m),
            slopes_core::Error::FormulaMismatch(m) => CliError::Verification(m),
            other => CliError::Failure(other.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.into())
    }
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Budget ran out; the output is flagged partial (exit 3).
    Partial,
}

/// The rendered output of a command.
pub struct Output {
    pub payload: String,
    pub status: Status,
}

impl Output {
    pub fn complete(payload: String) -> Self {
        Output {
            payload,
            status: Status::Complete,
        }
    }
}
