//! `qwstat`: stationary measures of three-state quantum walks.
//!
//! Exit codes: 0 verified, 2 classification failure, 3 verification drift,
//! 4 input error.

mod commands;
mod config;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qwstat_core::{Error, Topology};

use crate::parse::CoinChoice;

#[derive(Parser, Debug)]
#[command(name = "qwstat", version, about = "Stationary measures of three-state quantum walks")]
#[command(after_help = "Exit codes: 0 verified, 2 classification failure, 3 verification drift, 4 input error.\n\
    Defaults: topology cycle:30, steps 100, tol 1e-9 (QWSTAT_TOL overrides tol; --config loads a TOML file).")]
struct Cli {
    /// TOML file with `schema = 1` and any of `topology`, `steps`, `tol`
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report the Type 1 and Type 2 classification of a coin
    Classify(ClassifyArgs),
    /// Build an eigenstate and export its measure
    Stationary(StationaryArgs),
    /// Evolve an eigenstate and check that its measure does not move
    Verify(VerifyArgs),
    /// Sweep the A1(eta) or A2(rho) family and compare with the closed forms
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CoinArgs {
    /// grover | fourier | stefanak-eta | stefanak-rho | custom:<file.json>
    #[arg(long, default_value = "grover")]
    pub coin: CoinChoice,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    /// Walk type: 1 (diagonal reduced matrix) or 2 (anti-diagonal)
    #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
    pub walk_type: u8,
    /// Type 1 seed Ψ^L(0); a+bi, or w / w2 for ω, ω². Type 2 without --seeds uses φ_x = phi1.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub phi1: String,
    /// Type 1 seed Ψ^R(0)
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub phi3: String,
    /// Type 2 seed sequence: JSON array of [re, im] or {"schema":1,"start":s,"values":[...]}.
    /// On window:W, 2W+1 values are padded with φ_{-W-1} = 0.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// window:W or cycle:N [default: cycle:30]
    #[arg(long)]
    pub topology: Option<Topology>,
    /// Consistency tolerance for the classification
    #[arg(long, default_value_t = qwstat_core::reduced::DEFAULT_CONSISTENCY_TOL)]
    pub class_tol: f64,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[arg(long, default_value_t = qwstat_core::reduced::DEFAULT_CONSISTENCY_TOL)]
    pub tol: f64,
    /// Print a JSON document instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Output file; `.json` writes a measure document, anything else CSV. Omit for CSV on stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the state as JSON
    #[arg(long)]
    pub state_out: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub max_period: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Evolution steps [default: 100]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Allowed drift and eigen-residual [default: 1e-9]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Build a Type 2 state even when the square condition fails
    #[arg(long)]
    pub force: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Eta,
    Rho,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
    pub walk_type: u8,
    /// First grid value [default: 0 for eta, 0.1 for rho]
    #[arg(long)]
    pub from: Option<f64>,
    /// Last grid value, inclusive [default: 3 for eta, 0.9 for rho]
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Type 1 seed φ₁ (A1 uses φ₃ = φ₁)
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub phi1: String,
    /// Type 1 seed φ₃ [default: phi1]
    #[arg(long, allow_hyphen_values = true)]
    pub phi3: Option<String>,
    /// Type 2 seed sequence file
    #[arg(long, conflicts_with = "random")]
    pub seeds: Option<PathBuf>,
    /// Type 2: draw a random seed sequence from this RNG seed
    #[arg(long)]
    pub random: Option<u64>,
    #[arg(long)]
    pub topology: Option<Topology>,
    /// Threshold on max |mu - closed form| / max(1, |closed form|) [default: 1e-9]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Directory for per-parameter CSV files and summary.csv
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const EXIT_CLASSIFICATION: u8 = 2;
pub const EXIT_DRIFT: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ZeroEntry { .. }
            | Error::CentralReflection
            | Error::NonUnimodularLambda { .. }
            | Error::InconsistentLambda { .. }
            | Error::SquareConditionFailed { .. }
            | Error::ReducedShape { .. }
            | Error::UnsupportedFamily(_) => EXIT_CLASSIFICATION,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = config::Defaults::load(cli.config.as_deref()).and_then(|defaults| match cli.command {
        Command::Classify(args) => commands::classify(&args),
        Command::Stationary(args) => commands::stationary(&args, &defaults),
        Command::Verify(args) => commands::verify(&args, &defaults),
        Command::Sweep(args) => commands::sweep(&args, &defaults),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
