//! `hardy`: JSON-in, JSON-out front end for the Hardy-space toolkit.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{CliError, Report};

#[derive(Debug, Parser)]
#[command(name = "hardy", version, about = "Hardy-space numerics for discrete-time systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Tolerance override for the command's iterative steps.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Boundary grid size (power of two, at least 8).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convolution of two signals.
    Conv {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
    },
    /// ℓ¹, ℓ² and ℓ∞ gains of a convolution system.
    Stability {
        #[arg(long)]
        k: PathBuf,
    },
    /// Boundary values of a signal's Fourier series.
    Spectrum {
        #[arg(long)]
        phi: PathBuf,
    },
    /// Poles, zeros and stability class of a rational transfer function.
    Classify {
        #[arg(long)]
        b: PathBuf,
    },
    /// Inner/outer factorization of a causal-stable rational function.
    Factor {
        #[arg(long)]
        b: PathBuf,
    },
    /// Distance from a symbol to the causal bounded functions.
    Nehari {
        #[arg(long)]
        symbol: PathBuf,
        /// Hankel truncation size.
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Best causal approximation with constant-modulus error.
    Aak {
        #[arg(long)]
        symbol: PathBuf,
    },
    /// Norm bracket for a Toeplitz operator, optionally applied to a signal.
    Toeplitz {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long = "radius", num_args = 1.., default_values_t = [0.9, 0.99, 0.999])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        angles: usize,
    },
    /// von Neumann inequality: a single check or a seeded random sweep.
    VnCheck {
        #[arg(long, conflicts_with = "shift")]
        matrix: Option<PathBuf>,
        /// Use the truncated shift of this size as the contraction.
        #[arg(long)]
        shift: Option<usize>,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Nevanlinna-Pick interpolation.
    Pick {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Model matching `min ‖T − UCV‖∞` over stable compensators.
    Match {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Closed loop `P/(1 + PC)`.
    Feedback {
        #[arg(long)]
        plant: PathBuf,
        #[arg(long)]
        controller: PathBuf,
        /// Require a delay in the controller.
        #[arg(long)]
        strict: bool,
    },
    /// Band-limited sampling.
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Dyadic-tree model of the Dirichlet space.
    #[command(subcommand)]
    Dyadic(DyadicCommand),
    /// Weighted Dirichlet norms of a power series.
    Dirichlet {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SampleCommand {
    /// Sinc-series reconstruction with a tail bound.
    Reconstruct {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long = "t", num_args = 1.., required = true, allow_negative_numbers = true)]
        times: Vec<f64>,
        /// Energy of the samples outside the window.
        #[arg(long, default_value_t = 0.0)]
        tail_energy: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum DyadicCommand {
    /// Carleson constant of a measure on the tree.
    Carleson {
        #[arg(long)]
        measure: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Conv { .. } => "conv",
            Command::Stability { .. } => "stability",
            Command::Spectrum { .. } => "spectrum",
            Command::Classify { .. } => "classify",
            Command::Factor { .. } => "factor",
            Command::Nehari { .. } => "nehari",
            Command::Aak { .. } => "aak",
            Command::Toeplitz { .. } => "toeplitz",
            Command::VnCheck { .. } => "vn-check",
            Command::Pick { .. } => "pick",
            Command::Match { .. } => "match",
            Command::Feedback { .. } => "feedback",
            Command::Sample(SampleCommand::Reconstruct { .. }) => "sample reconstruct",
            Command::Dyadic(DyadicCommand::Carleson { .. }) => "dyadic carleson",
            Command::Dirichlet { .. } => "dirichlet",
        }
    }
}

fn validate(global: &Global) -> Result<(), CliError> {
    if let Some(tol) = global.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
    }
    if let Some(n) = global.grid {
        if n < 8 || !n.is_power_of_two() {
            return Err(CliError::Usage(format!("--grid must be a power of two >= 8, got {n}")));
        }
    }
    Ok(())
}

fn emit(doc: &serde_json::Value, out: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("report serializes");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let mut report = Report::default();
    let result = validate(&cli.global).and_then(|()| commands::run(&cli.command, &cli.global, &mut report));
    let error = result.err();
    if let Some(e) = &error {
        eprintln!("hardy {name}: {e}");
        if e.exit_code() == 2 {
            return ExitCode::from(2);
        }
    }
    let doc = report.render(name, error.as_ref());
    if let Err(e) = emit(&doc, cli.global.out.as_ref()) {
        eprintln!("hardy {name}: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(error.map_or(0, |e| e.exit_code()))
}
