//! `subspace-kit`: command-line boundary of the toolkit.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation
//! failure. Results go to stdout, diagnostics and timings to stderr.

pub mod args;
pub mod commands;
pub mod pipeline;

use std::fs;
use std::path::Path;

use thiserror::Error;

use subspace_core::evaluation::EvalError;
use subspace_core::io::DataIoError;
use subspace_core::rng::DEFAULT_SEED;
use subspace_core::visualization::VisError;
use subspace_core::{AlgoError, InvalidSpec};

use args::{Cli, Command};

pub const SEED_ENV: &str = "SUBSPACE_KIT_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }
}

impl From<AlgoError> for CliError {
    fn from(e: AlgoError) -> Self {
        match e {
            AlgoError::InsufficientData { .. } | AlgoError::EmptyDataset => CliError::Runtime(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<InvalidSpec> for CliError {
    fn from(e: InvalidSpec) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::UnknownMeasure { .. } | EvalError::NoPerCluster { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<VisError> for CliError {
    fn from(e: VisError) -> Self {
        match e {
            VisError::BadColor(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

/// I/O and parse failures of a named file.
pub(crate) fn io_error(path: &Path, e: DataIoError) -> CliError {
    match e {
        DataIoError::Io { .. } => CliError::Runtime(e.to_string()),
        other => CliError::Runtime(format!("{}: {other}", path.display())),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

pub(crate) fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("{}: {e}", dir.display())))
        }
        _ => Ok(()),
    }
}

/// Seed precedence: command line, then config, then `SUBSPACE_KIT_SEED`,
/// then [`DEFAULT_SEED`].
pub fn resolve_seed(cli: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = cli.or(config) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV} must be an unsigned integer, got {raw:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Cluster(a) => commands::cluster(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Visualize(a) => commands::visualize(&a),
        Command::Pipeline(a) => pipeline::run_pipeline(&a),
    }
}
