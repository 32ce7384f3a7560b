//! Experiment configuration: flags, `key = value` files, and configs embedded
//! in earlier JSON reports. Flags win over file values.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use fastsketch::EnsembleKind;
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Command {
    Build,
    Apply,
    Rip,
    Jl,
    Recover,
    Bench,
    Plan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Apply => "apply",
            Command::Rip => "rip",
            Command::Jl => "jl",
            Command::Recover => "recover",
            Command::Bench => "bench",
            Command::Plan => "plan",
        }
    }

    fn randomized(self) -> bool {
        self != Command::Plan
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Solver {
    Iht,
    Cosamp,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SignalModel {
    Sparse,
    PowerLaw,
}

/// A seed as given by the user: a number, or `auto` for a fresh random one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Auto,
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            Ok(SeedArg::Auto)
        } else {
            s.parse().map(SeedArg::Fixed).map_err(|_| format!("seed must be a 64-bit unsigned integer or 'auto', got '{s}'"))
        }
    }
}

/// Dimension flag: `N` or a doubling range `A..B` (bench only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimArg {
    pub start: usize,
    pub end: Option<usize>,
}

impl FromStr for DimArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid dimension '{t}'"));
        match s.split_once("..") {
            Some((a, b)) => Ok(DimArg { start: parse(a)?, end: Some(parse(b)?) }),
            None => Ok(DimArg { start: parse(s)?, end: None }),
        }
    }
}

/// Every knob of every subcommand. After [`ExperimentConfig::resolve`] all
/// fields the command uses are filled in, so the serialized form re-runs the
/// experiment without any further input.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<EnsembleKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Last dimension of a bench sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub bucket_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Master seed; `None` before resolution means "not given".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<Solver>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signal: Option<SignalModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjoint: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    // Where and how to run, not what to compute: never embedded in reports.
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub auto_seed: bool,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| anyhow!(UsageError(format!("invalid value '{value}' for '{key}': {e}"))))
}

fn parse_enum<T: clap::ValueEnum>(key: &str, value: &str) -> Result<T> {
    T::from_str(value, true).map_err(|e| anyhow!(UsageError(format!("invalid value '{value}' for '{key}': {e}"))))
}

impl ExperimentConfig {
    /// Sets one field from its textual form, as found in a config file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "command" => self.command = Some(parse_enum(key, value)?),
            "kind" => self.kind = Some(parse_value(key, value)?),
            "d" => {
                let dim: DimArg = parse_value(key, value)?;
                self.d = Some(dim.start);
                self.d_max = dim.end;
            }
            "d_max" => self.d_max = Some(parse_value(key, value)?),
            "m" => self.m = Some(parse_value(key, value)?),
            "B" => self.bucket_size = Some(parse_value(key, value)?),
            "k" => self.k = Some(parse_value(key, value)?),
            "epsilon" => self.epsilon = Some(parse_value(key, value)?),
            "trials" => self.trials = Some(parse_value(key, value)?),
            "seed" => match parse_value::<SeedArg>(key, value)? {
                SeedArg::Fixed(s) => self.seed = Some(s),
                SeedArg::Auto => self.auto_seed = true,
            },
            "method" => self.method = Some(parse_enum(key, value)?),
            "max_iters" => self.max_iters = Some(parse_value(key, value)?),
            "tol" => self.tol = Some(parse_value(key, value)?),
            "noise" => self.noise = Some(parse_value(key, value)?),
            "solver" => self.solver = Some(parse_enum(key, value)?),
            "signal" => self.signal = Some(parse_enum(key, value)?),
            "decay" => self.decay = Some(parse_value(key, value)?),
            "success_tol" => self.success_tol = Some(parse_value(key, value)?),
            "points" => self.points = Some(parse_value(key, value)?),
            "cap" => self.cap = Some(parse_value(key, value)?),
            "reps" => self.reps = Some(parse_value(key, value)?),
            "adjoint" => self.adjoint = Some(parse_value(key, value)?),
            "input" => self.input = Some(PathBuf::from(value)),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_value(key, value)?),
            other => bail!(UsageError(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Reads either a `key = value` file (`#` starts a comment) or a JSON
    /// report whose `config` object is reused.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        if text.trim_start().starts_with('{') {
            let mut doc: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| anyhow!(UsageError(format!("config {} is not valid JSON: {e}", path.display()))))?;
            let inner = doc.get_mut("config").map(serde_json::Value::take).unwrap_or(doc);
            return serde_json::from_value(inner)
                .map_err(|e| anyhow!(UsageError(format!("config {}: {e}", path.display()))));
        }
        let mut cfg = ExperimentConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!(UsageError(format!("{}:{}: expected 'key = value'", path.display(), n + 1))))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if flags.$f.is_some() { self.$f = flags.$f; } )* };
        }
        take!(command, kind, d, d_max, m, bucket_size, k, epsilon, trials, seed, method, max_iters, tol, noise, solver,
              signal, decay, success_tol, points, cap, reps, adjoint, input, out_dir, threads);
        if flags.auto_seed {
            self.auto_seed = true;
            self.seed = None;
        }
        self
    }

    /// Checks that the command has what it needs and fills in defaults. The
    /// result is what gets embedded in the report.
    pub fn resolve(mut self, command: Command) -> Result<Self> {
        if let Some(c) = self.command {
            if c != command {
                bail!(UsageError(format!("config is for '{}' but the subcommand is '{}'", c.name(), command.name())));
            }
        }
        self.command = Some(command);
        if command.randomized() {
            if self.auto_seed && self.seed.is_none() {
                self.seed = Some(rand::random());
            }
            if self.seed.is_none() {
                bail!(UsageError(format!("'{}' is randomized: pass --seed <u64> or --seed auto", command.name())));
            }
        }
        let need = |name: &str, present: bool| -> Result<()> {
            if present {
                Ok(())
            } else {
                Err(anyhow!(UsageError(format!("'{}' requires --{name}", command.name()))))
            }
        };
        need("d", self.d.is_some())?;
        if command != Command::Plan {
            need("m", self.m.is_some())?;
            need("B", self.bucket_size.is_some())?;
        }
        self.kind.get_or_insert(EnsembleKind::PartialFourier);
        if command != Command::Bench && self.d_max.is_some() {
            bail!(UsageError("a dimension range is only meaningful for 'bench'".into()));
        }
        match command {
            Command::Plan => {
                need("k", self.k.is_some())?;
                need("epsilon", self.epsilon.is_some())?;
            }
            Command::Build => {}
            Command::Apply => {
                need("input", self.input.is_some())?;
                self.adjoint.get_or_insert(false);
            }
            Command::Rip => {
                need("k", self.k.is_some())?;
                let method = *self.method.get_or_insert(Method::Exact);
                self.trials.get_or_insert(if method == Method::Exact { 1 } else { 1000 });
                if method == Method::Exact {
                    self.cap.get_or_insert(fastsketch::analysis::rip::DEFAULT_SUPPORT_CAP as u64);
                }
            }
            Command::Jl => {
                self.trials.get_or_insert(1);
                if self.input.is_none() {
                    self.points.get_or_insert(50);
                }
            }
            Command::Recover => {
                need("k", self.k.is_some())?;
                self.trials.get_or_insert(1);
                self.max_iters.get_or_insert(500);
                self.tol.get_or_insert(1e-10);
                self.noise.get_or_insert(0.0);
                self.solver.get_or_insert(Solver::Both);
                self.success_tol.get_or_insert(1e-6);
                if *self.signal.get_or_insert(SignalModel::Sparse) == SignalModel::PowerLaw {
                    self.decay.get_or_insert(1.0);
                }
            }
            Command::Bench => {
                let trials = *self.trials.get_or_insert(9);
                if trials < 5 {
                    bail!(UsageError(format!("bench needs at least 5 trials, got {trials}")));
                }
                self.reps.get_or_insert(10);
                let d = self.d.unwrap_or(0);
                let d_max = *self.d_max.get_or_insert(d);
                if d_max < d {
                    bail!(UsageError(format!("empty dimension range {d}..{d_max}")));
                }
            }
        }
        if self.trials == Some(0) {
            bail!(UsageError("trials must be at least 1".into()));
        }
        Ok(self)
    }

    pub fn master_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind.unwrap_or(EnsembleKind::PartialFourier)
    }
}
