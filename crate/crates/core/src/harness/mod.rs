//! Experiment harness: configuration files, the matrix cache, the runner and its reports.
//!
//! Exit codes used by the command-line front end: [`EXIT_OK`] when every check passes,
//! [`EXIT_CHECK_FAILED`] when at least one fails, [`EXIT_CONFIG`] for configuration
//! errors and [`EXIT_INTERNAL`] for anything else.

pub mod cache;
pub mod config;
pub mod report;
pub mod runner;

use std::path::PathBuf;

use thiserror::Error;

pub use cache::{default_cache_root, CacheError, CacheStats, MatrixCache, CACHE_ENV};
pub use config::{parse_config, parse_config_str, Check, ConfigError, ExperimentConfig, Tolerances};
pub use report::{read_report, CheckItem, CheckReport, RunReport};
pub use runner::{run, RunOptions, RunOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not a run report: {message}")]
    BadReport { path: PathBuf, message: String },
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("{0}")]
    Internal(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => EXIT_CONFIG,
            _ => EXIT_INTERNAL,
        }
    }
}
