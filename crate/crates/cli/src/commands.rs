//! One function per subcommand. Every randomized quantity is drawn from a
//! stream derived from the master seed, the trial index and a purpose tag, and
//! per-trial results are collected in trial order, so outputs do not depend on
//! how rayon schedules the work.

use anyhow::{bail, Context, Result};
use fastsketch::analysis::{exact_rip_constant_with_cap, mc_rip_lower_bound, recommend_parameters, RipReport};
use fastsketch::io::{read_point_set_file, write_point_set_file};
use fastsketch::jl::{distortion_report, jl_embed, DistortionReport, PointSet};
use fastsketch::linalg::norm2;
use fastsketch::recovery::{
    add_noise, cosamp, iht, l2l1_metrics, power_law_signal, random_sparse_signal, RecoveryResult,
};
use fastsketch::seed::{derive_seed, stream};
use fastsketch::sketch::build_sketch;
use fastsketch::{Complex64, RowSource, SketchOperator, SketchSpec};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::config::{ExperimentConfig, Method, SignalModel, Solver};
use crate::report::Output;
use crate::UsageError;

fn operator(cfg: &ExperimentConfig, trial: u64) -> Result<SketchOperator> {
    let seed = derive_seed(cfg.master_seed(), trial, "operator");
    let d = cfg.d.expect("resolved");
    let (m, b) = (cfg.m.expect("resolved"), cfg.bucket_size.expect("resolved"));
    Ok(build_sketch(d, m, b, cfg.kind(), seed)?)
}

fn spec_of(op: &SketchOperator) -> SketchSpec {
    op.spec().expect("operators built from a seed carry their spec")
}

pub fn plan(cfg: &ExperimentConfig, out: Output) -> Result<()> {
    let plan = recommend_parameters(cfg.d.expect("resolved"), cfg.k.expect("resolved"), cfg.epsilon.expect("resolved"), cfg.kind())?;
    out.finish(cfg, "plan", plan)
}

#[derive(Serialize)]
struct BuildResult<'a> {
    operator: SketchSpec,
    scale: f64,
    source: &'a RowSource,
    /// Sign table, bucket-major.
    signs: &'a [i8],
}

pub fn build(cfg: &ExperimentConfig, mut out: Output) -> Result<()> {
    let op = operator(cfg, 0)?;
    out.file("operator.bin", |p| Ok(op.write_audit_dump(std::io::BufWriter::new(std::fs::File::create(p)?))?))?;
    let result = BuildResult { operator: spec_of(&op), scale: op.scale(), source: op.source(), signs: op.sign_table().as_slice() };
    out.finish(cfg, "build", result)
}

#[derive(Serialize)]
struct ApplyResult {
    operator: SketchSpec,
    adjoint: bool,
    points: usize,
    input_dim: usize,
    output_dim: usize,
    output_norms: Vec<f64>,
}

pub fn apply(cfg: &ExperimentConfig, mut out: Output) -> Result<()> {
    if out.dir().is_none() {
        bail!(UsageError("'apply' writes its vectors to CSV; pass --out-dir".into()));
    }
    let input = cfg.input.as_ref().expect("resolved");
    let pts = read_point_set_file(input).with_context(|| format!("reading {}", input.display()))?;
    let op = operator(cfg, 0)?;
    let adjoint = cfg.adjoint.unwrap_or(false);
    let mapped = pts
        .points()
        .par_iter()
        .map(|p| if adjoint { op.apply_adjoint(p) } else { op.apply(p) })
        .collect::<fastsketch::Result<Vec<_>>>()?;
    let out_dim = if adjoint { op.dim() } else { op.m() };
    let result_pts = PointSet::new(out_dim, true, mapped)?;
    out.file("apply.csv", |p| Ok(write_point_set_file(p, &result_pts)?))?;
    let result = ApplyResult {
        operator: spec_of(&op),
        adjoint,
        points: pts.len(),
        input_dim: pts.dim(),
        output_dim: out_dim,
        output_norms: fastsketch::jl::norms(&result_pts),
    };
    out.finish(cfg, "apply", result)
}

#[derive(Serialize)]
struct RipRow {
    k: usize,
    method: &'static str,
    operator_seed: u64,
    epsilon: f64,
    worst_lambda_min: f64,
    worst_lambda_max: f64,
    supports_evaluated: u64,
}

#[derive(Serialize)]
struct RipResult {
    operator: SketchSpec,
    report: RipReport,
}

pub fn rip(cfg: &ExperimentConfig, mut out: Output) -> Result<()> {
    let op = operator(cfg, 0)?;
    let k = cfg.k.expect("resolved");
    let mut report = match cfg.method.expect("resolved") {
        Method::Exact => exact_rip_constant_with_cap(&op.densify()?, k, cfg.cap.expect("resolved") as u128)?,
        Method::Mc => mc_rip_lower_bound(&op, k, cfg.trials.expect("resolved"), &mut stream(cfg.master_seed(), 0, "rip-supports"))?,
    };
    let operator_seed = op.seed().expect("seeded operator");
    report.seed = Some(operator_seed);
    out.csv(
        "rip.csv",
        &[RipRow {
            k,
            method: if cfg.method == Some(Method::Exact) { "exact" } else { "monte_carlo" },
            operator_seed,
            epsilon: report.epsilon,
            worst_lambda_min: report.worst_lambda_min,
            worst_lambda_max: report.worst_lambda_max,
            supports_evaluated: report.supports_evaluated,
        }],
    )?;
    out.finish(cfg, "rip", RipResult { operator: spec_of(&op), report })
}

#[derive(Serialize)]
struct JlRow {
    trial: u64,
    operator_seed: u64,
    sign_seed: u64,
    epsilon_hat: f64,
    max_expansion: f64,
    min_contraction: f64,
    pairs_evaluated: u64,
    zero_distance_pairs: u64,
}

impl JlRow {
    fn new(trial: u64, operator_seed: u64, sign_seed: u64, r: DistortionReport) -> Self {
        JlRow {
            trial,
            operator_seed,
            sign_seed,
            epsilon_hat: r.epsilon_hat,
            max_expansion: r.max_expansion,
            min_contraction: r.min_contraction,
            pairs_evaluated: r.pairs_evaluated,
            zero_distance_pairs: r.zero_distance_pairs,
        }
    }
}

#[derive(Serialize)]
struct JlResult {
    points: usize,
    d: usize,
    m: usize,
    median_epsilon_hat: f64,
    /// Fraction of trials with `epsilon_hat <= epsilon`, when `epsilon` is set.
    success_rate: Option<f64>,
    trials: Vec<JlRow>,
}

fn gaussian_points(cfg: &ExperimentConfig) -> Result<PointSet> {
    let (n, d) = (cfg.points.expect("resolved"), cfg.d.expect("resolved"));
    let mut rng = stream(cfg.master_seed(), 0, "points");
    let rows: Vec<Vec<f64>> =
        (0..n).map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect();
    Ok(PointSet::from_real(d, rows)?)
}

pub(crate) fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn jl(cfg: &ExperimentConfig, mut out: Output) -> Result<()> {
    let pts = match &cfg.input {
        Some(path) => read_point_set_file(path).with_context(|| format!("reading {}", path.display()))?,
        None => gaussian_points(cfg)?,
    };
    let trials = cfg.trials.expect("resolved") as u64;
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<JlRow> {
            let op = operator(cfg, t)?;
            let sign_seed = derive_seed(cfg.master_seed(), t, "jl-signs");
            let emb = jl_embed(&op, &pts, sign_seed)?;
            Ok(JlRow::new(t, op.seed().expect("seeded"), sign_seed, distortion_report(&pts, &emb)?))
        })
        .collect::<Result<Vec<_>>>()?;
    out.csv("jl.csv", &rows)?;
    let eps_hat: Vec<f64> = rows.iter().map(|r| r.epsilon_hat).collect();
    let success_rate =
        cfg.epsilon.map(|e| eps_hat.iter().filter(|&&v| v <= e).count() as f64 / eps_hat.len() as f64);
    let result = JlResult {
        points: pts.len(),
        d: pts.dim(),
        m: cfg.m.expect("resolved"),
        median_epsilon_hat: median(eps_hat),
        success_rate,
        trials: rows,
    };
    out.finish(cfg, "jl", result)
}

/// JSON has no infinity; an unbounded ratio is written as the string "inf".
fn ratio<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

#[derive(Serialize, Clone)]
struct RecoverRow {
    trial: u64,
    solver: &'static str,
    operator_seed: u64,
    relative_error: f64,
    err_l2: f64,
    #[serde(serialize_with = "ratio")]
    head_tail_ratio: f64,
    iterations: usize,
    converged: bool,
    residual_norm: f64,
    residual_increases: usize,
}

#[derive(Serialize)]
struct SolverSummary {
    solver: &'static str,
    success_rate: f64,
    median_relative_error: f64,
    median_iterations: f64,
}

#[derive(Serialize)]
struct RecoverResult {
    summaries: Vec<SolverSummary>,
    trials: Vec<RecoverRow>,
}

type SolverFn = fn(&SketchOperator, &[Complex64], usize, usize, f64) -> fastsketch::Result<RecoveryResult>;

fn solver_names(solver: Solver) -> &'static [&'static str] {
    match solver {
        Solver::Iht => &["iht"],
        Solver::Cosamp => &["cosamp"],
        Solver::Both => &["iht", "cosamp"],
    }
}

fn recover_trial(cfg: &ExperimentConfig, t: u64) -> Result<Vec<RecoverRow>> {
    let op = operator(cfg, t)?;
    let (d, k) = (op.dim(), cfg.k.expect("resolved"));
    let mut signal_rng = stream(cfg.master_seed(), t, "signal");
    let x: Vec<Complex64> = match cfg.signal.expect("resolved") {
        SignalModel::Sparse => random_sparse_signal(d, k, &mut signal_rng)?.to_dense(),
        SignalModel::PowerLaw => power_law_signal(d, cfg.decay.expect("resolved"), &mut signal_rng),
    };
    let mut y = op.apply(&x)?;
    add_noise(&mut y, cfg.noise.expect("resolved"), &mut stream(cfg.master_seed(), t, "noise"));
    let (iters, tol) = (cfg.max_iters.expect("resolved"), cfg.tol.expect("resolved"));
    let solvers: &[(&'static str, SolverFn)] =
        match cfg.solver.expect("resolved") {
            Solver::Iht => &[("iht", iht)],
            Solver::Cosamp => &[("cosamp", cosamp)],
            Solver::Both => &[("iht", iht), ("cosamp", cosamp)],
        };
    let x_norm = norm2(&x);
    solvers
        .iter()
        .map(|&(name, solve)| {
            let r = solve(&op, &y, k, iters, tol)?;
            let metrics = l2l1_metrics(&x, &r.estimate, k)?;
            Ok(RecoverRow {
                trial: t,
                solver: name,
                operator_seed: op.seed().expect("seeded"),
                relative_error: if x_norm > 0.0 { metrics.err_l2 / x_norm } else { metrics.err_l2 },
                err_l2: metrics.err_l2,
                head_tail_ratio: metrics.head_tail_ratio,
                iterations: r.iterations_used,
                converged: r.converged,
                residual_norm: r.residual_norm,
                residual_increases: r.residual_increases.len(),
            })
        })
        .collect()
}

pub fn recover(cfg: &ExperimentConfig, mut out: Output) -> Result<()> {
    let trials = cfg.trials.expect("resolved") as u64;
    let rows: Vec<RecoverRow> = (0..trials)
        .into_par_iter()
        .map(|t| recover_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.csv("recover.csv", &rows)?;
    let success_tol = cfg.success_tol.expect("resolved");
    let summaries = solver_names(cfg.solver.expect("resolved"))
        .iter()
        .map(|name| {
            let mine: Vec<&RecoverRow> = rows.iter().filter(|r| r.solver == *name).collect();
            SolverSummary {
                solver: name,
                success_rate: mine.iter().filter(|r| r.relative_error <= success_tol).count() as f64 / mine.len() as f64,
                median_relative_error: median(mine.iter().map(|r| r.relative_error).collect()),
                median_iterations: median(mine.iter().map(|r| r.iterations as f64).collect()),
            }
        })
        .collect();
    out.finish(cfg, "recover", RecoverResult { summaries, trials: rows })
}
