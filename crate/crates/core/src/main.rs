use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use elvis::cli;

#[derive(Parser)]
#[command(name = "elvis", version, about = "Least-time interface crossing for convex velocity sets")]
struct Args {
    /// Residual tolerance, overriding the value in the input file.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and print the result.
    Solve {
        problem: PathBuf,
        /// Write the per-iteration bracket trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sample the residual interval across the bracket.
    DeltaCurve {
        problem: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one problem per target on a rectangular grid.
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a problem file without solving it.
    Validate { problem: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut stdout = io::stdout().lock();
    let eps = args.epsilon;
    let outcome = match &args.command {
        Command::Solve { problem, trace } => cli::cmd_solve(problem, trace.as_deref(), eps, &mut stdout),
        Command::DeltaCurve { problem, samples, out } => {
            cli::cmd_delta_curve(problem, *samples, out, eps, &mut stdout)
        }
        Command::Sweep { spec, out } => cli::cmd_sweep(spec, out, eps, &mut stdout),
        Command::Validate { problem } => cli::cmd_validate(problem, eps, &mut stdout),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("elvis: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
