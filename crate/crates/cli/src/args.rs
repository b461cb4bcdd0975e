use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "derange",
    version,
    about = "Exact f-derangement counts and path-decomposition trials"
)]
pub struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the f-derangements of one map by every applicable method.
    Count(CountArgs),
    /// The D[A,B,C] table for one domain size.
    Table(TableArgs),
    #[command(subcommand)]
    Experiment(ExperimentCmd),
    #[command(subcommand)]
    Decompose(DecomposeCmd),
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct CountArgs {
    /// 2-max profile `A,B,C`.
    #[arg(long, value_parser = parse_profile)]
    pub profile: Option<[usize; 3]>,
    /// 1-based images, `_` for undefined, e.g. `1,1,_`.
    #[arg(long, value_parser = parse_images)]
    pub images: Option<Images>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Images(pub Vec<Option<usize>>);

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=TABLE_MAX_N as i64))]
    pub n: u32,
}

/// Largest table the `table` command builds.
pub const TABLE_MAX_N: usize = 40;

#[derive(Debug, Subcommand)]
pub enum ExperimentCmd {
    /// Worst deviation of D/n! from 1/e over k-max maps, per n.
    LimitSweep(LimitSweepArgs),
    /// D/n! for a map splitting n items evenly over s targets.
    Equitable(EquitableArgs),
    /// Moving one preimage to an unused target: D[f] <= D[f*] and the (n-2)! bound.
    LemmaAudit(LemmaAuditArgs),
    /// Identities and monotonicity properties of the tables.
    PropertySuite(PropertySuiteArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct LimitSweepArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Maps sampled per size when k > 2.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct EquitableArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LemmaAuditArgs {
    #[arg(long = "n-max", default_value_t = 6)]
    pub n_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PropertySuiteArgs {
    #[arg(long = "n-max", default_value_t = 8)]
    pub n_max: usize,
}

#[derive(Debug, Subcommand)]
pub enum DecomposeCmd {
    /// One full pipeline run with every intermediate artifact.
    Demo(DemoArgs),
    /// Success statistics over random 5-regular hosts.
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct DemoArgs {
    /// Use K5,5.
    #[arg(long)]
    pub k55: bool,
    /// Edge list of a 5-regular bipartite host.
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value = "single", value_parser = ["single", "all10"])]
    pub strategy: String,
}

fn parse_profile(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected A,B,C, got '{s}'"));
    }
    let mut out = [0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| format!("'{p}' is not a non-negative integer"))?;
    }
    Ok(out)
}

fn parse_images(s: &str) -> Result<Images, String> {
    s.split(',')
        .map(str::trim)
        .map(|p| match p {
            "_" => Ok(None),
            p => p
                .parse()
                .map(Some)
                .map_err(|_| format!("'{p}' is neither a target nor '_'")),
        })
        .collect::<Result<_, _>>()
        .map(Images)
}
