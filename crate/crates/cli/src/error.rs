use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: parse error at `{field}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        field: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("semantic error at `{field}`: {message}")]
    Semantic { field: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] kframe_core::Error),
}

impl CliError {
    pub(crate) fn semantic(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Semantic {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code: every error that reaches `main` is a usage or
    /// configuration problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
