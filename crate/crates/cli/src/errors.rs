//! CLI error type and the exit-code contract:
//! 0 success, 2 usage/config error, 3 I/O error, 4 numerical degeneracy.

use roomflock_core::diagnostics::DiagnosticsError;
use roomflock_core::dynamics::SimError;
use roomflock_core::inference::InferenceError;
use roomflock_core::io::FileError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Io(_) => CliError::Io(e.to_string()),
            // Malformed contents are the caller's configuration problem.
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<InferenceError> for CliError {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::DegenerateGeneration { .. } => CliError::Degenerate(e.to_string()),
            InferenceError::Row { ref source, .. } => CliError::Usage(format!("{e}: {source}")),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DiagnosticsError> for CliError {
    fn from(e: DiagnosticsError) -> Self {
        match e {
            DiagnosticsError::ConstantInput(_) => CliError::Degenerate(e.to_string()),
            DiagnosticsError::Case { ref source, .. } => match source {
                InferenceError::DegenerateGeneration { .. } => {
                    CliError::Degenerate(e.to_string())
                }
                _ => CliError::Usage(e.to_string()),
            },
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
