//! Command-line experiment runner for `lflab`.
//!
//! Every experiment is computed in full before anything is written, so a
//! run that fails to compute leaves no artifacts behind. A failed `--check`
//! still writes its artifacts. Exit codes: 0 success, 2 invalid
//! configuration, 3 computation or I/O failure, 4 failed `--check`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod plotdata;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::artifacts::RunSummary;
use crate::config::{Experiment, ExperimentConfig};

pub const DEFAULT_OUT_DIR: &str = "lflab-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(lflab::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl From<lflab::Error> for CliError {
    fn from(e: lflab::Error) -> Self {
        match e {
            lflab::Error::InvalidArgument(msg) => CliError::Config(msg),
            other => CliError::Compute(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lflab", version, about = "Numerical experiments on linear combinations of L-functions")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Directory receiving artifacts and the run manifest.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Evaluate the experiment's acceptance checks; exit 4 if any fails.
    #[arg(long, global = true)]
    pub check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(flatten)]
    Experiment(Experiment),
    /// Run an experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Convert a result artifact into long-format CSV for plotting.
    Plotdata {
        #[arg(long)]
        artifact: PathBuf,
        /// Output file (default: `<artifact stem>.plot.csv` beside the artifact).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Fully resolved run request.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub seed: u64,
    pub workers: Option<usize>,
    pub out_dir: PathBuf,
    pub check: bool,
    pub experiment: Experiment,
}

impl RunRequest {
    /// Command-line flags take precedence over the file.
    pub fn from_config(cfg: ExperimentConfig, cli: &Cli) -> Self {
        Self {
            seed: cli.seed.unwrap_or(cfg.seed),
            workers: cli.workers.or(cfg.workers),
            out_dir: cli.out_dir.clone().or(cfg.out_dir).unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
            check: cli.check || cfg.check,
            experiment: cfg.experiment,
        }
    }
}

/// Validates, computes, writes artifacts and evaluates checks.
pub fn execute(req: &RunRequest) -> Result<RunSummary, CliError> {
    req.experiment.validate()?;
    if req.workers == Some(0) {
        return Err(CliError::Config("workers must be at least 1".into()));
    }
    let started = artifacts::unix_now();
    let mut ctx = commands::Ctx::new(req.seed, req.workers);
    let output = commands::compute(&req.experiment, &mut ctx)?;
    let summary = artifacts::write_run(req, &ctx, output, started)?;
    if req.check {
        let failed: Vec<String> = summary.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        if !failed.is_empty() {
            return Err(CliError::Check(failed.join("; ")));
        }
    }
    Ok(summary)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.workers.filter(|&n| n > 0) {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let req = match &cli.command {
        Command::Experiment(exp) => RunRequest {
            seed: cli.seed.unwrap_or(0),
            workers: cli.workers,
            out_dir: cli.out_dir.clone().unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
            check: cli.check,
            experiment: exp.clone(),
        },
        Command::Run { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            RunRequest::from_config(ExperimentConfig::from_toml(&text)?, &cli)
        }
        Command::Plotdata { artifact, output } => {
            let path = plotdata::emit(artifact, output.as_deref())?;
            println!("{}", path.display());
            return Ok(());
        }
    };
    let summary = execute(&req)?;
    for path in &summary.paths {
        println!("{}", path.display());
    }
    for c in &summary.checks {
        eprintln!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lflab: {e}");
            e.exit_code()
        }
    }
}
