use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("input state `{name}` is not normalized (norm² = {norm_sqr})")]
    NotNormalized { name: &'static str, norm_sqr: f64 },

    #[error("invalid convention string `{input}`: {reason}")]
    Convention { input: String, reason: String },

    #[error("invalid sweep configuration: {0}")]
    Sweep(String),

    #[error("invalid averaging specification: {0}")]
    Averaging(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed sweep CSV: {0}")]
    Csv(String),

    #[error("malformed defaults file: {0}")]
    Defaults(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
