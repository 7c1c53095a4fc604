//! `geophase`: run dissipative geometric-phase protocols from the command line.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 numeric or verification
//! failure. Times are in units of 1/gamma.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "geophase", version, about = "Geometric phases of atoms steered by squeezed reservoirs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One or more loops of the four-level protocol; prints a JSON summary.
    FourLevel(FourLevelArgs),
    /// Two reservoirs on a five-level atom; prints a JSON summary.
    FiveLevel(FiveLevelArgs),
    /// Visibility loss against loop speed; CSV rows (phidot, phase_error, visibility_loss, predicted_loss).
    Sweep(SweepArgs),
    /// Relaxation of a basis state towards the dark state; CSV rows (t, fidelity).
    Steady(SteadyArgs),
    /// Discrete Berry phase of the dark-state loop.
    Berry(BerryArgs),
    /// Discrete Berry phase of a spin-1/2 loop at fixed polar angle.
    SpinHalf(SpinHalfArgs),
    /// Checks the operator identities on random parameter draws.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the trajectory or table as CSV to this path
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Integration steps between stored samples (default keeps at most 10^4 samples)
    #[arg(long, value_parser = positive_count)]
    stride: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct FourLevelArgs {
    /// Squeezing amplitude r in [0, 10]
    #[arg(long, value_parser = squeezing)]
    r: f64,
    /// Reservoir decay rate
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    gamma: f64,
    /// Angular speed of the squeezing phase
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    phidot: f64,
    /// Initial squeezing phase
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi0: f64,
    /// Number of loops
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    loops: u32,
    /// Integration step (default 1e-2 / (gamma cosh 2r))
    #[arg(long, value_parser = positive)]
    step: Option<f64>,
    /// Samples of the dark-state loop for the Berry-phase integral
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(3..))]
    points: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone)]
struct FiveLevelArgs {
    /// Squeezing amplitude of the first reservoir
    #[arg(long, value_parser = squeezing)]
    r1: f64,
    /// Squeezing amplitude of the second reservoir
    #[arg(long, value_parser = squeezing)]
    r2: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    gamma1: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    gamma2: f64,
    /// Common angular speed of both squeezing phases
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    phidot: f64,
    /// Initial squeezing phase of both reservoirs
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi0: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    loops: u32,
    /// Integration step (default 1e-2 / max(gamma_i cosh 2r_i))
    #[arg(long, value_parser = positive)]
    step: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[arg(long, value_parser = squeezing)]
    r: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    gamma: f64,
    /// Comma-separated loop speeds
    #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
    phidot_list: Vec<f64>,
    /// Fixed integration step (default 1e-2 / (gamma cosh 2r))
    #[arg(long, value_parser = positive)]
    step: Option<f64>,
    /// Number of sweep points run concurrently
    #[arg(long, default_value_t = 1, value_parser = positive_count)]
    jobs: usize,
    /// Write the table to this path instead of standard output
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Level {
    Minus,
    Zero,
    Plus,
}

#[derive(Args, Debug, Clone)]
struct SteadyArgs {
    #[arg(long, value_parser = squeezing)]
    r: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    gamma: f64,
    /// Initial basis state
    #[arg(long, value_enum, default_value_t = Level::Zero)]
    initial: Level,
    #[arg(long, default_value_t = 50.0, value_parser = positive)]
    tmax: f64,
    #[arg(long, default_value_t = 1e-2, value_parser = positive)]
    step: f64,
    /// Write the table to this path instead of standard output
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BerryArgs {
    #[arg(long, value_parser = squeezing)]
    r: f64,
    /// Number of states on the loop
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(3..))]
    points: u32,
}

#[derive(Args, Debug, Clone)]
struct SpinHalfArgs {
    /// Polar angle in [0, pi]
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u32).range(3..))]
    points: u32,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Random parameter draws per identity
    #[arg(long, default_value_t = 100, value_parser = positive_count)]
    draws: usize,
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn squeezing(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=geophase::bath::R_MAX).contains(&x) {
        Ok(x)
    } else {
        Err(format!("must lie in [0, {}], got {s}", geophase::bath::R_MAX))
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("must be a positive integer, got {s}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::FourLevel(a) => commands::four_level(&a),
        Command::FiveLevel(a) => commands::five_level(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Steady(a) => commands::steady(&a),
        Command::Berry(a) => commands::berry(&a),
        Command::SpinHalf(a) => commands::spin_half(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geophase: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
