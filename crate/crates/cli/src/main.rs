//! `hcalg`: level-set tracing, criterion checks, witness traces and zero
//! parity tables from the command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric error (the error
//! name is printed on stderr), 4 a criterion or parity check did not pass
//! and `--strict` was given.

mod catalog;
mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hcalg", version, about = "Hypercyclic-algebra criterion toolkit")]
struct Cli {
    /// Print the parsed configuration as JSON and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
enum Command {
    /// Trace level curves |Φ| = r from seeds and write them as CSV.
    Trace(TraceArgs),
    /// Scan for a strictly convex arc, check the hypothesis and inflate it.
    Check(CheckArgs),
    /// Run the witness construction until every norm is below eps.
    Witness(WitnessArgs),
    /// Zero counts of weighted composition orbits of powers.
    Zeros(ZerosArgs),
    /// Run the check on the whole example catalog and write a summary table.
    Examples(ExamplesArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TraceArgs {
    /// Symbol literal: cos, sin, zexp, exp, exp-a:A, rose, poly:[c0,c1,…], scaled:S:A.
    #[arg(long)]
    pub symbol: String,
    #[arg(long, default_value_t = 1.0)]
    pub level: f64,
    /// Seed on the ray at this angle (radians); repeatable.
    #[arg(long = "seed-ray", allow_negative_numbers = true)]
    pub seed_rays: Vec<f64>,
    /// Seed on the vertical line Re z = X above the real axis; repeatable.
    #[arg(long = "seed-x", allow_negative_numbers = true)]
    pub seed_xs: Vec<f64>,
    /// Seed at every crossing on N evenly spaced rays (used when no other seed is given).
    #[arg(long, default_value_t = 16)]
    pub rays: usize,
    /// Seeds are searched on 0 < t ≤ t_max.
    #[arg(long, default_value_t = 8.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Point budget per direction of each trace.
    #[arg(long, default_value_t = 5000)]
    pub max_points: usize,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG figure.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Leave the unit circle out of the figure.
    #[arg(long)]
    pub no_unit_circle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long)]
    pub symbol: String,
    #[arg(long, default_value_t = 1.0)]
    pub level: f64,
    /// Number of evenly spaced seed rays.
    #[arg(long, default_value_t = 64)]
    pub rays: usize,
    /// Power for the Minkowski-sum conditions.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Skip the inflation search.
    #[arg(long)]
    pub no_inflate: bool,
    /// Hypothesis grid, n × n samples.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Margins below this are inconclusive.
    #[arg(long, default_value_t = hcalg::criterion::DEFAULT_MARGIN_FLOOR)]
    pub margin_floor: f64,
    /// Trace step of the scan.
    #[arg(long, default_value_t = 0.002)]
    pub step: f64,
    /// Frequencies per family in the emitted witness problem.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// JSON report; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the witness problem for the chosen arc here.
    #[arg(long)]
    pub problem_out: Option<PathBuf>,
    /// SVG of the chosen arc, its hull and any violation point.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Exit with 4 unless the verdict is pass.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    /// Problem JSON file.
    #[arg(long, conflicts_with = "from_report")]
    pub problem: Option<PathBuf>,
    /// Report written by `check`; its witness problem is used.
    #[arg(long)]
    pub from_report: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Radius of the disk the norms are taken on.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 10000)]
    pub q_max: u32,
    /// CSV trace; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary with q and the decay factors.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ZerosArgs {
    /// Polynomial f as poly:[c0,c1,…].
    #[arg(long)]
    pub f: String,
    /// Weight exponent Q (ω = e^Q) as poly:[…]; ω ≡ 1 when absent.
    #[arg(long)]
    pub weight: Option<String>,
    /// φ(z) = scale·z + shift.
    #[arg(long, default_value = "1")]
    pub scale: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub shift: String,
    #[arg(long, default_value_t = 2)]
    pub power: u32,
    /// Number of iterations n.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Disk as CENTER,RADIUS, e.g. `-2+0.5i,0.5`; repeatable.
    #[arg(long = "disk", required = true, allow_hyphen_values = true)]
    pub disks: Vec<String>,
    #[arg(long, default_value_t = hcalg::obstruction::DEFAULT_NODES)]
    pub n_quad: usize,
    /// CSV table; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with 4 if any count is not divisible by the power.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ExamplesArgs {
    /// Summary CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for one criterion SVG per example.
    #[arg(long)]
    pub figures: Option<PathBuf>,
    /// Number of seed rays per symbol.
    #[arg(long, default_value_t = 64)]
    pub rays: usize,
    /// Hypothesis grid, n × n samples.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Exit with 4 if any verdict differs from the expected one.
    #[arg(long)]
    pub strict: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.print_config {
        let text = serde_json::to_string_pretty(&cli).map_err(|e| CliError::Config(e.to_string()))?;
        println!("{text}");
        return Ok(());
    }
    match &cli.command {
        Command::Trace(args) => commands::trace(args),
        Command::Check(args) => commands::check(args),
        Command::Witness(args) => commands::witness(args),
        Command::Zeros(args) => commands::zeros(args),
        Command::Examples(args) => catalog::examples(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
