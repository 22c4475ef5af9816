use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("{module}: {source}")]
    Numeric {
        module: &'static str,
        #[source]
        source: swimwake_core::Error,
    },
    #[error("not found: {0}")]
    NotFound(PathBuf),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for caller mistakes, 3 for runtime faults.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) | CliError::NotFound(_) => 2,
            _ => 3,
        }
    }
}

/// Attach module context to a core error.
pub trait Context<T> {
    fn within(self, module: &'static str) -> Result<T>;
}

impl<T> Context<T> for swimwake_core::Result<T> {
    fn within(self, module: &'static str) -> Result<T> {
        self.map_err(|source| CliError::Numeric { module, source })
    }
}
