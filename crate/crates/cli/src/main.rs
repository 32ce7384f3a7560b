//! `fastsketch`: experiments with bucketed structured sketching matrices.
//!
//! Every subcommand prints a JSON report on stdout. With `--out-dir` the report
//! is also written to `<out-dir>/<command>.json` together with CSV artifacts,
//! and `--config <report.json>` re-runs it exactly.

mod bench;
mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fastsketch::EnsembleKind;

use config::{Command, DimArg, ExperimentConfig, Method, SeedArg, SignalModel, Solver};
use report::Output;

/// A usage or configuration mistake; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "fastsketch", version, about = "Restricted-isometry sketches from bucketed structured matrices")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Sample an operator and print its description.
    Build(Common),
    /// Apply an operator (or its adjoint) to the vectors in a CSV file.
    Apply(Common),
    /// Restricted-isometry constant: exact enumeration or Monte-Carlo lower bound.
    Rip(Common),
    /// Johnson-Lindenstrauss distortion over random operators.
    Jl(Common),
    /// Sparse recovery with IHT and/or CoSaMP.
    Recover(Common),
    /// Time apply and adjoint over a doubling range of dimensions.
    Bench(Common),
    /// Recommend m and B for a target sparsity and distortion.
    Plan(Common),
}

#[derive(Args)]
struct Common {
    /// Ambient dimension, or `A..B` for a doubling sweep (bench).
    #[arg(long)]
    d: Option<DimArg>,
    #[arg(long)]
    m: Option<usize>,
    /// Bucket size.
    #[arg(long = "B", short = 'B')]
    bucket_size: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// partial_fourier, partial_hadamard, partial_circulant or dense_gaussian.
    #[arg(long)]
    kind: Option<EnsembleKind>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed, or `auto` to draw one (it is recorded in the report).
    #[arg(long)]
    seed: Option<SeedArg>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Standard deviation of the measurement noise.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long, value_enum)]
    solver: Option<Solver>,
    #[arg(long, value_enum)]
    signal: Option<SignalModel>,
    #[arg(long)]
    decay: Option<f64>,
    /// Relative error below which a recovery counts as a success.
    #[arg(long)]
    success_tol: Option<f64>,
    /// Number of random points for `jl` when no input is given.
    #[arg(long)]
    points: Option<usize>,
    /// Maximum number of supports the exact RIP search may enumerate.
    #[arg(long)]
    cap: Option<u64>,
    /// Calls per timing sample (bench).
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    adjoint: bool,
    /// CSV point set (first record `d=<d>,complex=<bool>`).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads; defaults to FASTSKETCH_THREADS, then all cores.
    #[arg(long, env = "FASTSKETCH_THREADS")]
    threads: Option<usize>,
    /// `key = value` file or an earlier JSON report. Flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn into_config(self) -> Result<ExperimentConfig> {
        let flags = ExperimentConfig {
            kind: self.kind,
            d: self.d.map(|d| d.start),
            d_max: self.d.and_then(|d| d.end),
            m: self.m,
            bucket_size: self.bucket_size,
            k: self.k,
            epsilon: self.epsilon,
            trials: self.trials,
            seed: match self.seed {
                Some(SeedArg::Fixed(s)) => Some(s),
                _ => None,
            },
            auto_seed: self.seed == Some(SeedArg::Auto),
            method: self.method,
            max_iters: self.max_iters,
            tol: self.tol,
            noise: self.noise,
            solver: self.solver,
            signal: self.signal,
            decay: self.decay,
            success_tol: self.success_tol,
            points: self.points,
            cap: self.cap,
            reps: self.reps,
            adjoint: self.adjoint.then_some(true),
            input: self.input,
            out_dir: self.out_dir,
            threads: self.threads,
            command: None,
        };
        let base = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        Ok(base.overlay(flags))
    }
}

fn run(cli: Cli) -> Result<()> {
    let (command, common) = match cli.command {
        Sub::Build(c) => (Command::Build, c),
        Sub::Apply(c) => (Command::Apply, c),
        Sub::Rip(c) => (Command::Rip, c),
        Sub::Jl(c) => (Command::Jl, c),
        Sub::Recover(c) => (Command::Recover, c),
        Sub::Bench(c) => (Command::Bench, c),
        Sub::Plan(c) => (Command::Plan, c),
    };
    let cfg = common.into_config()?.resolve(command)?;
    if let Some(n) = cfg.threads {
        if n == 0 {
            anyhow::bail!(UsageError("threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting the thread pool")?;
    }
    let out = Output::new(cfg.out_dir.as_deref())?;
    match command {
        Command::Build => commands::build(&cfg, out),
        Command::Apply => commands::apply(&cfg, out),
        Command::Rip => commands::rip(&cfg, out),
        Command::Jl => commands::jl(&cfg, out),
        Command::Recover => commands::recover(&cfg, out),
        Command::Bench => bench::bench(&cfg, out),
        Command::Plan => commands::plan(&cfg, out),
    }
}

/// Maps an error chain to `(kind, exit code)`.
fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return ("usage", 2);
        }
        if cause.is::<std::io::Error>() {
            return ("io", 3);
        }
        if let Some(e) = cause.downcast_ref::<fastsketch::Error>() {
            return match e {
                fastsketch::Error::Io(_)
                | fastsketch::Error::Csv(_)
                | fastsketch::Error::Json(_)
                | fastsketch::Error::Parse(_) => ("input", 3),
                _ => ("invalid_parameter", 2),
            };
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            return if e.is_io_error() { ("io", 3) } else { ("internal", 1) };
        }
    }
    ("internal", 1)
}

fn report_error(kind: &str, message: &str, code: u8) {
    let doc = serde_json::json!({ "error": { "kind": kind, "message": message, "exit_code": code } });
    eprintln!("{doc}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report_error("usage", e.to_string().trim(), 2);
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            report_error(kind, &format!("{e:#}"), code);
            ExitCode::from(code)
        }
    }
}
