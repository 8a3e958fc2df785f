//! Command-line front end for `pstmsc-core`.
//!
//! Configuration comes from a flat dotted-key file (see [`config`]) plus
//! `--set key=value` overrides. Exit codes: 0 on success, 1 for usage or
//! configuration errors, 2 when the physics says no (insecure, zero
//! probability, unreachable target, failed oracle check).

pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::RawConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "pstmsc", version, about = "Key rates for photon-subtracted two-mode squeezed coherent states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for parallel evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Override a configuration key, e.g. `--set channel.eta=0.995`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Secret key rate at a single parameter point (JSON).
    Keyrate,
    /// Key rate along one swept parameter, or maximal distance per target (CSV).
    Sweep,
    /// Maximal secure distance per family (JSON).
    MaxDistance,
    /// Scalar optimization of d, tau or V_A per family (JSON).
    Optimize,
    /// Compare closed forms with the truncated-Fock oracle (JSON).
    OracleCheck,
}

pub fn load_config(cli: &Cli) -> Result<RawConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    for kv in &cli.overrides {
        cfg.set(kv)?;
    }
    Ok(cfg)
}

fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|source| CliError::Output { path: path.display().to_string(), source })
        }
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|source| CliError::Output { path: "stdout".into(), source }),
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    let cfg = load_config(cli)?;
    let report = match cli.command {
        Command::Keyrate => commands::keyrate(&cfg)?,
        Command::Sweep => commands::sweep(&cfg)?,
        Command::MaxDistance => commands::max_distance(&cfg)?,
        Command::Optimize => commands::optimize(&cfg)?,
        Command::OracleCheck => commands::oracle(&cfg)?,
    };
    emit(cli, &report.body)?;
    report.failure.map_or(Ok(()), Err)
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
