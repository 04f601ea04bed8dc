use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error(transparent)]
    Core(#[from] ntn_coherence::Error),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config_error",
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io_error",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        match self {
            CliError::Config { path, .. } => v["field"] = json!(path),
            CliError::Core(ntn_coherence::Error::QuadratureNotConverged {
                best_re,
                best_im,
                est_error,
                nodes_used,
            }) => {
                v["best_estimate"] = json!([best_re, best_im]);
                v["est_error"] = json!(est_error);
                v["nodes_used"] = json!(nodes_used);
            }
            CliError::Io { path, .. } => v["path"] = json!(path.display().to_string()),
            _ => {}
        }
        v.to_string()
    }
}
