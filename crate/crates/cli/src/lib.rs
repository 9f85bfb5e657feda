//! Command-line front end: resolves scenarios, runs experiments and writes
//! figure-ready CSV files.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use args::{Cli, Command};
pub use config::{parse_config, ConfigError};

/// Runs a parsed command line; `argv` is recorded in the run manifest.
pub fn run(cli: &Cli, argv: &[String]) -> anyhow::Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Sweep(a) => commands::cmd_sweep(a, argv),
        Command::Compare(a) => commands::cmd_compare(a, argv),
        Command::SinrStats(a) => commands::cmd_sinr_stats(a, argv),
        Command::Trial(a) => commands::cmd_trial(a, argv),
    }
}

/// Parses and runs `argv` (including the program name).
pub fn run_args(argv: &[String]) -> anyhow::Result<Vec<PathBuf>> {
    let cli = Cli::try_parse_from(argv)?;
    run(&cli, argv)
}

/// Category tag for the one-line diagnostic.
pub fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<d2d_core::Error>() {
            return e.kind();
        }
        if cause.is::<ConfigError>() {
            return "config";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
        if cause.is::<clap::Error>() {
            return "usage";
        }
    }
    "usage"
}

/// Single-line rendering of an error and its causes.
pub fn diagnostic(err: &anyhow::Error) -> String {
    let msg = err
        .chain()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(": ");
    let msg = msg
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    format!("d2dsim: error[{}]: {}", error_kind(err), msg)
}
