use serde::Serialize;

use evenq_core::Error;

/// Failures a command can end with; each maps to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("method '{method}' does not accept {kind} input")]
    MethodMismatch { method: String, kind: String },
    #[error("{what} residual {residual:e} exceeds {limit:e}")]
    Residual {
        what: &'static str,
        residual: f64,
        limit: f64,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::OddN { .. }
                | Error::BadPartition { .. }
                | Error::BadArity(_)
                | Error::ZeroCase
                | Error::NotZeroCase { .. }
                | Error::Infeasible { .. } => 3,
                Error::TooLarge { .. } => 4,
                _ => 2,
            },
            CliError::MethodMismatch { .. } => 3,
            CliError::Residual { .. } => 5,
            CliError::Usage(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "validation",
            3 => "method",
            4 => "size",
            _ => "numerical",
        }
    }

    pub fn info(&self) -> ErrorInfo {
        ErrorInfo {
            code: self.exit_code(),
            kind: self.kind(),
            message: self.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}
