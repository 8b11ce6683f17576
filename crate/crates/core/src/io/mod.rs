//! Problem files, run reports and the command entry points behind the
//! `levi` binary.

pub mod commands;
pub mod problem_file;
pub mod report;

pub use commands::{load_problem, run_command, Command};
pub use problem_file::{ModeName, ProblemFile, ProblemKind, FORMAT_VERSION};
pub use report::{CommandOptions, RunReport, Witness};

use crate::ce::CeError;
use crate::levi::LeviError;
use crate::norms::NormError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported format version {0}, expected 1")]
    Version(u32),
    #[error("invalid problem file: {0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Levi(#[from] LeviError),
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

impl IoError {
    /// 2 for bad input or usage, 1 for a failure inside the engine.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Parse { .. } | IoError::Version(_) | IoError::Schema(_) | IoError::Usage(_) | IoError::File { .. } => 2,
            IoError::Levi(_) | IoError::Ce(_) | IoError::Norm(_) => 1,
        }
    }
}
