//! `eggfit`: fit irradiance samples, score fits, and compute link metrics.

mod commands;
mod error;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eggfit::channel::ModelTag;
use eggfit::gof::Bins;
use eggfit::performance::{DetectionMode, ExactRoute, Modulation};

use crate::io::SnrGrid;

#[derive(Parser, Debug)]
#[command(
    name = "eggfit",
    version,
    about = "Exponential-generalized-gamma fading: fitting and link performance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a mixture model to a sample file by EM and write a JSON report.
    Fit(FitArgs),
    /// Exact (and optionally asymptotic) outage, BER or capacity over an SNR grid.
    Perf(PerfArgs),
    /// Monte Carlo estimates of the same metrics, with standard errors.
    Simulate(SimulateArgs),
    /// Draw synthetic irradiance samples.
    Synth(SynthArgs),
    /// Score a fit report against a sample file.
    Gof(GofArgs),
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Sample file: one positive value per line, `#` comments, optional `irradiance` header.
    #[arg(long)]
    input: PathBuf,
    /// Model family: egg, eg or explognormal.
    #[arg(long, default_value = "egg", value_parser = parse_with::<ModelTag>)]
    model: ModelTag,
    /// Stop when no parameter moves by more than this.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Iteration cap per restart.
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Independent EM starts; the best log-likelihood wins.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Seed for restart perturbations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Histogram bins for the R² score: a count or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_with::<Bins>)]
    bins: Bins,
    /// Report path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ParamSource {
    /// Fit report produced by `eggfit fit`.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Inline EGG parameters `omega,lambda,a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    Outage,
    Ber,
    Capacity,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Nats,
    Bits,
}

#[derive(Args, Debug)]
struct LinkArgs {
    #[command(flatten)]
    source: ParamSource,
    /// Detection: imdd (SNR ∝ I²) or het (SNR ∝ I).
    #[arg(long, default_value = "imdd", value_parser = parse_with::<DetectionMode>)]
    detection: DetectionMode,
    /// ook, bpsk, mpsk:M or mqam:M; defaults to ook for imdd and bpsk for het.
    #[arg(long, value_parser = parse_with::<Modulation>)]
    modulation: Option<Modulation>,
    /// Average SNR grid in dB, `FROM:TO:STEP` (inclusive).
    #[arg(long, default_value = "0:60:5", allow_hyphen_values = true)]
    snr_db: SnrGrid,
    /// Outage threshold (linear).
    #[arg(long, default_value_t = 1.0)]
    gamma_th: f64,
    /// Capacity unit.
    #[arg(long, value_enum, default_value_t = Unit::Nats)]
    unit: Unit,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PerfArgs {
    /// Metric to evaluate.
    #[arg(value_enum)]
    metric: Metric,
    #[command(flatten)]
    link: LinkArgs,
    /// Also emit high-SNR asymptote rows.
    #[arg(long)]
    asymptotic: bool,
    /// Primary route for BER and capacity: foxh (checked against quadrature) or quadrature.
    #[arg(long, default_value = "foxh", value_parser = parse_with::<ExactRoute>)]
    route: ExactRoute,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Metric to estimate.
    #[arg(value_enum)]
    metric: Metric,
    #[command(flatten)]
    link: LinkArgs,
    /// Fading draws per grid point.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Seed; every grid point reuses it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    source: ParamSource,
    /// Number of samples.
    #[arg(long)]
    n: usize,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample file path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GofArgs {
    /// Sample file.
    #[arg(long)]
    input: PathBuf,
    /// Fit report whose model is scored.
    #[arg(long)]
    report: PathBuf,
    /// Histogram bins for the R² score: a count or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_with::<Bins>)]
    bins: Bins,
    /// JSON path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_with<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Perf(a) => commands::perf(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Synth(a) => commands::synth(a),
        Command::Gof(a) => commands::gof(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eggfit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
