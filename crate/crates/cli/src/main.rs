//! `quatslice`: transforms, regular products and property suites from the shell.

mod jobs;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quatslice::Side;

use crate::jobs::Job;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Parser)]
#[command(name = "quatslice", version, about = "Slice-regular calculus and quaternionic Laplace transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input JSON: a file, `-` for stdin, or inline JSON.
    #[arg(long, global = true)]
    input: Option<String>,

    /// Probe grid or point list: a file, `-` for stdin, or inline JSON.
    #[arg(long, global = true)]
    probes: Option<String>,

    /// Quadrature tolerance (transform, table) or threshold override (verify).
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the property suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Laplace transform of a time-domain function at the probes.
    Transform {
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Regular product of two series `{"f": .., "g": ..}`.
    Regprod,
    /// Evaluate a series (optionally after an operation) at the probes.
    Eval,
    /// Run a property suite: algebra, regularity, laplace or all.
    Verify { suite: String },
    /// Left and right transforms side by side.
    Table,
}

fn run(cli: &Cli) -> Result<jobs::Outcome, CliError> {
    let job = Job {
        input: cli.input.clone(),
        probes: cli.probes.clone(),
        tol: cli.tol,
        format: cli.format,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Transform { side } => {
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            jobs::transform(&job, side)
        }
        Command::Regprod => jobs::regprod(&job),
        Command::Eval => jobs::eval(&job),
        Command::Verify { suite } => jobs::verify(&job, suite),
        Command::Table => jobs::table(&job),
    }
}

fn write_out(path: Option<&PathBuf>, body: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body)?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_out(cli.out.as_ref(), &outcome.body) {
                eprintln!("quatslice: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if outcome.failures > 0 {
                eprintln!("quatslice: {} of {} failed", outcome.failures, outcome.total);
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("quatslice: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(m)) => {
            eprintln!("quatslice: {m}");
            ExitCode::from(1)
        }
    }
}
