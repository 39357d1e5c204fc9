//! `posekit`: convert pose files, score predictions, refine matrices and run
//! the synthetic representation experiment.

mod commands;
mod error;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use posekit::experiment::ExperimentConfig;

use commands::{Method, Mode, Target};
use error::CliError;
use records::Repr;

const TOLERANCE_VAR: &str = "POSEKIT_TOLERANCE";
const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Parser)]
#[command(name = "posekit", version, about = "Head-pose rotation tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert pose records between euler, quat, matrix and vectors.
    Convert {
        #[arg(long)]
        input: PathBuf,
        /// Input representation; detected from the header when omitted.
        #[arg(long)]
        from: Option<Repr>,
        #[arg(long)]
        to: Repr,
        /// Output file (.csv or .json); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score predictions against ground truth, matched by id.
    Metrics {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, default_value_t = 33.0)]
        bin_width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project 3x3 matrices onto the nearest rotation.
    Refine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Svd)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the worked-example checks; exits 0 only if all pass.
    Verify {
        #[arg(long, hide = true)]
        perturb_convention: bool,
    },
    /// Train and evaluate a linear regressor on synthetic poses.
    Experiment {
        #[arg(long, default_value_t = ExperimentConfig::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Target::Vectors)]
        target: Target,
        /// Test-set sampling.
        #[arg(long, value_enum, default_value_t = Mode::Uniform)]
        mode: Mode,
        #[arg(long, default_value_t = 33.0)]
        bin_width: f64,
        #[arg(long, default_value_t = ExperimentConfig::default().epochs)]
        epochs: usize,
        #[arg(long, default_value_t = ExperimentConfig::default().learning_rate)]
        learning_rate: f64,
        #[arg(long, default_value_t = ExperimentConfig::default().alpha)]
        alpha: f64,
        #[arg(long, default_value_t = ExperimentConfig::default().n_train)]
        n_train: usize,
        #[arg(long, default_value_t = ExperimentConfig::default().n_test)]
        n_test: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn tolerance() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_VAR) {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Usage(format!("{TOLERANCE_VAR} must be a positive number, got '{s}'"))),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert { input, from, to, out } => commands::convert(&input, from, to, out.as_deref(), tolerance()?),
        Command::Metrics { gt, pred, bin_width, out } => {
            commands::metrics(&gt, &pred, bin_width, out.as_deref(), tolerance()?)
        }
        Command::Refine { input, method, out } => commands::refine(&input, method, out.as_deref()),
        Command::Verify { perturb_convention } => commands::verify(perturb_convention),
        Command::Experiment { seed, target, mode, bin_width, epochs, learning_rate, alpha, n_train, n_test, out } => {
            let cfg = ExperimentConfig { seed, epochs, learning_rate, alpha, n_train, n_test, ..Default::default() };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            commands::experiment(&cfg, target, mode, bin_width, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
