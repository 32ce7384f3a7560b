//! Wall-clock scaling of the matrix-free apply and adjoint over a doubling
//! sweep of `d`. Timings are machine dependent and excluded from any
//! reproducibility comparison; everything else in the report is seeded.

use std::time::Instant;

use anyhow::Result;
use fastsketch::seed::{derive_seed, stream};
use fastsketch::sketch::build_sketch;
use fastsketch::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::commands::median;
use crate::config::ExperimentConfig;
use crate::report::Output;

#[derive(Serialize)]
struct BenchRow {
    d: usize,
    m: usize,
    #[serde(rename = "B")]
    bucket_size: usize,
    kind: &'static str,
    trials: usize,
    reps: usize,
    median_apply_seconds: f64,
    median_adjoint_seconds: f64,
    /// Median time at `d` over the median at `d/2`; empty for the first row.
    apply_doubling_ratio: Option<f64>,
    adjoint_doubling_ratio: Option<f64>,
    /// Per-trial seconds per call, `;`-separated.
    apply_timings: String,
    adjoint_timings: String,
}

#[derive(Serialize)]
struct BenchResult {
    rows: Vec<BenchRow>,
}

fn gaussian(len: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..len).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Seconds per call of `f`, averaged over `reps` back-to-back calls.
fn time_per_call(reps: usize, mut f: impl FnMut() -> fastsketch::Result<Vec<Complex64>>) -> Result<f64> {
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(f()?);
    }
    Ok(start.elapsed().as_secs_f64() / reps as f64)
}

fn joined(v: &[f64]) -> String {
    v.iter().map(|t| format!("{t:e}")).collect::<Vec<_>>().join(";")
}

pub fn bench(cfg: &ExperimentConfig, mut out: Output) -> Result<()> {
    let (d0, d_max) = (cfg.d.expect("resolved"), cfg.d_max.expect("resolved"));
    let (m, b) = (cfg.m.expect("resolved"), cfg.bucket_size.expect("resolved"));
    let (trials, reps) = (cfg.trials.expect("resolved"), cfg.reps.expect("resolved"));

    let mut dims = vec![d0];
    while let Some(next) = dims.last().unwrap().checked_mul(2).filter(|&n| n <= d_max) {
        dims.push(next);
    }
    let mut cases = Vec::with_capacity(dims.len());
    for (idx, &d) in dims.iter().enumerate() {
        let idx = idx as u64;
        let op = build_sketch(d, m, b, cfg.kind(), derive_seed(cfg.master_seed(), idx, "operator"))?;
        let mut rng = stream(cfg.master_seed(), idx, "input");
        let x = gaussian(d, &mut rng);
        let z = gaussian(m, &mut rng);
        // Warm caches and allocator before timing; this run is discarded.
        op.apply(&x)?;
        op.apply_adjoint(&z)?;
        cases.push((op, x, z));
    }

    // Trials are interleaved across dimensions so that a burst of background
    // load lands on every size rather than skewing one doubling ratio.
    let mut apply = vec![Vec::with_capacity(trials); dims.len()];
    let mut adjoint = vec![Vec::with_capacity(trials); dims.len()];
    for _ in 0..trials {
        for (i, (op, x, z)) in cases.iter().enumerate() {
            apply[i].push(time_per_call(reps, || op.apply(x))?);
            adjoint[i].push(time_per_call(reps, || op.apply_adjoint(z))?);
        }
    }

    let mut rows: Vec<BenchRow> = Vec::with_capacity(dims.len());
    for (i, &d) in dims.iter().enumerate() {
        let (ma, mj) = (median(apply[i].clone()), median(adjoint[i].clone()));
        let prev = rows.last();
        rows.push(BenchRow {
            d,
            m,
            bucket_size: b,
            kind: cfg.kind().as_str(),
            trials,
            reps,
            median_apply_seconds: ma,
            median_adjoint_seconds: mj,
            apply_doubling_ratio: prev.map(|p| ma / p.median_apply_seconds),
            adjoint_doubling_ratio: prev.map(|p| mj / p.median_adjoint_seconds),
            apply_timings: joined(&apply[i]),
            adjoint_timings: joined(&adjoint[i]),
        });
    }
    out.csv("bench.csv", &rows)?;
    out.finish(cfg, "bench", BenchResult { rows })
}
