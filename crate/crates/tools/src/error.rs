use std::path::PathBuf;

/// Errors of the IO, format and command layer.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
  #[error("{path}: {source}")]
  Io {
    path: PathBuf,
    #[source]
    source: std::io::Error,
  },
  /// Malformed or inconsistent file content; `context` names the file and
  /// where in it the problem was found.
  #[error("{context}: {msg}")]
  Format { context: String, msg: String },
  #[error(transparent)]
  Core(#[from] qtmt_core::Error),
  #[error("{0}")]
  Usage(String),
  #[error("{0}")]
  Mismatch(String),
}

pub type Result<T> = std::result::Result<T, ToolError>;

impl ToolError {
  pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
    ToolError::Io { path: path.into(), source }
  }

  pub fn format(context: impl Into<String>, msg: impl Into<String>) -> Self {
    ToolError::Format { context: context.into(), msg: msg.into() }
  }

  /// Process exit code: 2 for usage errors, 3 for everything data related.
  pub fn exit_code(&self) -> i32 {
    match self {
      ToolError::Usage(_) => 2,
      _ => 3,
    }
  }
}

impl From<csv::Error> for ToolError {
  fn from(e: csv::Error) -> Self {
    ToolError::format("csv", e.to_string())
  }
}
