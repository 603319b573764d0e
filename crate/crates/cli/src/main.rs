//! `talabounds`: exact and sampled influence bounds for functions on `Z_k^n`.
//!
//! Exit codes: 0 success, 1 usage error, 2 malformed input data, 3 size cap
//! exceeded.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "talabounds", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Worker threads for the inner computations; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write tables as CSV instead of JSON (family and transform only).
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Variance, influence and bound report for a function under a product measure.
    Analyze(commands::AnalyzeArgs),
    /// Coefficients in the measure-adapted basis, or back with --inverse.
    Transform(commands::TransformArgs),
    /// The orthonormal basis for a measure and its sup-norm constant.
    Basis(commands::BasisArgs),
    /// Materialize a builtin function family as a table file.
    Family(commands::FamilyArgs),
    /// Search for the largest level-m ratio ||f||_4 / ||f||_2.
    Hyper(commands::HyperArgs),
    /// Check the replica symmetrization identity for every frequency.
    Symcheck(commands::SymcheckArgs),
    /// Exact vs closed-form ratios for the constant-10 counterexample.
    Hatami(commands::HatamiArgs),
    /// Monte Carlo estimates for a builtin family without tabulating it.
    Mc(commands::McArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Analyze(a) => commands::analyze(&a, g),
        Command::Transform(a) => commands::transform(&a, g),
        Command::Basis(a) => commands::basis(&a, g),
        Command::Family(a) => commands::family(&a, g),
        Command::Hyper(a) => commands::hyper(&a, g),
        Command::Symcheck(a) => commands::symcheck(&a, g),
        Command::Hatami(a) => commands::hatami(&a, g),
        Command::Mc(a) => commands::mc(&a, g),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
