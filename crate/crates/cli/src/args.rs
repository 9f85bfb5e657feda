use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "d2dsim",
    version,
    about = "Spectrum allocation experiments for D2D underlay cells"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean sum rate against the number of D2D pairs.
    Sweep(CommonArgs),
    /// Paired comparison of allocators on shared drops.
    Compare(CommonArgs),
    /// Empirical distribution of cellular UE 0's SINR.
    SinrStats(SinrArgs),
    /// Dump one drop: topology, channel gains and allocation traces.
    Trial(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::Compare(_) => "compare",
            Command::SinrStats(_) => "sinr-stats",
            Command::Trial(_) => "trial",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Base seed; trial k uses seed + k. Overrides the file's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Cellular UE count, or a list/range to sweep (e.g. `3,4`).
    #[arg(long, value_name = "N|LIST")]
    pub cellular: Option<String>,
    /// D2D pair count, or a list/range to sweep (e.g. `1..10`).
    #[arg(long, value_name = "N|RANGE")]
    pub d2d: Option<String>,
    /// Comma-separated allocator names.
    #[arg(long, value_name = "LIST")]
    pub allocators: Option<String>,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Also write the per-trial samples.
    #[arg(long)]
    pub dump_raw: bool,
    #[arg(long, value_name = "X")]
    pub price_step: Option<f64>,
    #[arg(long, value_name = "N")]
    pub package_cap: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SinrArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Histogram bins for the pdf estimate.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}
