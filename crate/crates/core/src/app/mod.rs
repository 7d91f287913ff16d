//! Batch front end: named experiments, sweeps and deterministic file output.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{Cli, Experiment, RunConfig};
pub use experiments::{run, Table};

#[derive(Debug, Error)]
pub enum AppError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Beam(#[from] crate::error::BeamError),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invariant checks failed: {0}")]
    ChecksFailed(String),
}

impl AppError {
    /// 1 for validation failures, 2 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Io { .. } | AppError::ConfigRead { .. } => 2,
            _ => 1,
        }
    }
}
