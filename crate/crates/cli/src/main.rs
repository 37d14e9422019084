//! `zfock`: verification suites for involutive R-matrices, their Fock
//! representations and diagonal S-matrices.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 for
//! usage or input errors.

mod check;
mod iso;
mod report;
mod smatrix;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::VerificationReport;

#[derive(Parser)]
#[command(name = "zfock", version, about = "Verification lab for involutive R-matrices and their Fock representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the full JSON report to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Record zero wall times so reports are byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Axioms, projectors, Fock space, exchange relations, vacuum functional.
    Check(CheckArgs),
    /// Factorization, equivalence or obstruction between two R-matrices.
    Iso(IsoArgs),
    /// Axioms and limits of a diagonal rapidity-dependent S-matrix.
    Smatrix(SmatrixArgs),
}

#[derive(Args)]
pub struct CheckArgs {
    spec: PathBuf,
    /// Truncation level N of the Fock space.
    #[arg(long, default_value_t = 4)]
    max_level: usize,
    /// Dimension m of the internal space.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    internal_dim: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Random Gram matrices in the positivity probe.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum IsoMode {
    Factorize,
    Equivalence,
    Obstruction,
}

#[derive(Args)]
pub struct IsoArgs {
    left: PathBuf,
    right: PathBuf,
    #[arg(long, value_enum)]
    mode: IsoMode,
    #[arg(long, default_value_t = 4)]
    max_level: usize,
    /// Largest particle number for character comparison.
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    internal_dim: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
pub struct SmatrixArgs {
    spec: PathBuf,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    theta_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    theta_max: f64,
    /// Grid points for unitarity, Hermitian analyticity and crossing.
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Points per axis of the Yang–Baxter pair grid.
    #[arg(long, default_value_t = 20)]
    ybe_points: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

pub fn read_input(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Seed for randomized probes, from `ZFOCK_SEED`.
pub fn seed() -> Result<u64> {
    match std::env::var("ZFOCK_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("ZFOCK_SEED must be an unsigned integer, got {v:?}")),
        Err(_) => Ok(0),
    }
}

fn emit(report: &VerificationReport, output: &Output) -> Result<()> {
    print!("{}", report.summary());
    if let Some(path) = &output.json {
        let mut text = serde_json::to_string_pretty(report)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(VerificationReport, Output)> {
    match cli.command {
        Command::Check(args) => {
            let output = args.output.clone();
            Ok((check::run(&args)?, output))
        }
        Command::Iso(args) => {
            let output = args.output.clone();
            Ok((iso::run(&args)?, output))
        }
        Command::Smatrix(args) => {
            let output = args.output.clone();
            Ok((smatrix::run(&args)?, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(report, output)| {
        emit(&report, &output)?;
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
