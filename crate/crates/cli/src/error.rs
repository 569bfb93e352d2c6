use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Model(#[from] scattering::Error),

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("plot {path}: {message}")]
    Plot { path: PathBuf, message: String },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 0 success, 1 I/O or parse, 2 domain/math, 3 validation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Plot { .. } => 1,
            CliError::Model(scattering::Error::GridMismatch { .. }) => 3,
            CliError::Model(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn csv(path: &Path, err: csv::Error) -> Self {
        let line = err.position().map(|p| format!(" (line {})", p.line())).unwrap_or_default();
        match err.into_kind() {
            csv::ErrorKind::Io(source) => CliError::io(path, source),
            other => CliError::Parse(format!("{}{line}: {other:?}", path.display())),
        }
    }
}
