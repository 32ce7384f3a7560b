//! The computations behind the page, as ordinary Rust so they can be tested
//! natively.

use fastsketch::analysis::{exact_rip_constant, mc_rip_lower_bound};
use fastsketch::jl::{distortion_report, jl_embed, PointSet};
use fastsketch::recovery::{cosamp, iht, random_sparse_signal};
use fastsketch::seed::{derive_seed, stream};
use fastsketch::sketch::build_sketch;
use fastsketch::{Complex64, EnsembleKind, Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Above this many supports the curve switches to Monte-Carlo estimates so
/// the page stays responsive.
pub const EXACT_SUPPORT_LIMIT: u128 = 50_000;
const MC_TRIALS: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RipPoint {
    pub m: usize,
    pub epsilon: f64,
    pub exact: bool,
}

/// RIP constant of one operator per `m`, all drawn from the same seed.
pub fn rip_curve(kind: EnsembleKind, d: usize, k: usize, bucket: usize, ms: &[usize], seed: u64) -> Result<Vec<RipPoint>> {
    let exact = fastsketch::analysis::rip::binomial(d, k) <= EXACT_SUPPORT_LIMIT;
    ms.iter()
        .enumerate()
        .map(|(i, &m)| {
            let op = build_sketch(d, m, bucket, kind, derive_seed(seed, i as u64, "operator"))?;
            let report = if exact {
                exact_rip_constant(&op.densify()?, k)?
            } else {
                mc_rip_lower_bound(&op, k, MC_TRIALS, &mut stream(seed, i as u64, "rip-supports"))?
            };
            Ok(RipPoint { m, epsilon: report.epsilon, exact })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryDemo {
    /// Real parts of the true signal and of each estimate.
    pub truth: Vec<f64>,
    pub iht: Vec<f64>,
    pub cosamp: Vec<f64>,
    pub iht_relative_error: f64,
    pub cosamp_relative_error: f64,
    pub iht_iterations: usize,
    pub cosamp_iterations: usize,
}

fn relative_error(estimate: &[Complex64], truth: &[Complex64]) -> f64 {
    let num: f64 = estimate.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = truth.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Recovers one random `k`-sparse signal from noiseless measurements.
pub fn recovery_demo(kind: EnsembleKind, d: usize, m: usize, bucket: usize, k: usize, seed: u64) -> Result<RecoveryDemo> {
    let op = build_sketch(d, m, bucket, kind, derive_seed(seed, 0, "operator"))?;
    let x = random_sparse_signal(d, k, &mut stream(seed, 0, "signal"))?.to_dense();
    let y = op.apply(&x)?;
    let a = iht(&op, &y, k, 500, 1e-10)?;
    let b = cosamp(&op, &y, k, 500, 1e-10)?;
    let (xa, xb) = (a.estimate.to_dense(), b.estimate.to_dense());
    Ok(RecoveryDemo {
        truth: x.iter().map(|v| v.re).collect(),
        iht: xa.iter().map(|v| v.re).collect(),
        cosamp: xb.iter().map(|v| v.re).collect(),
        iht_relative_error: relative_error(&xa, &x),
        cosamp_relative_error: relative_error(&xb, &x),
        iht_iterations: a.iterations_used,
        cosamp_iterations: b.iterations_used,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JlHistogram {
    /// `bins + 1` edges spanning `[lo, hi]`.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Every pairwise ratio `‖y_i - y_j‖ / ‖x_i - x_j‖`.
    pub ratios: Vec<f64>,
    pub epsilon_hat: f64,
}

/// Pairwise distance ratios of `n` pseudo-random points after a JL embedding.
pub fn jl_histogram(kind: EnsembleKind, d: usize, m: usize, bucket: usize, n: usize, bins: usize, seed: u64) -> Result<JlHistogram> {
    if n < 2 || bins == 0 {
        return Err(Error::InvalidParameter("need at least two points and one bin".into()));
    }
    let mut rng = stream(seed, 0, "points");
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let pts = PointSet::from_real(d, rows)?;
    let op = build_sketch(d, m, bucket, kind, derive_seed(seed, 0, "operator"))?;
    let emb = jl_embed(&op, &pts, derive_seed(seed, 0, "jl-signs"))?;
    let dist = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
    let mut ratios = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let before = dist(&pts.points()[i], &pts.points()[j]);
            if before > 0.0 {
                ratios.push(dist(&emb.points()[i], &emb.points()[j]) / before);
            }
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min).min(1.0);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(1.0);
    let width = (hi - lo).max(f64::EPSILON) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &r in &ratios {
        counts[(((r - lo) / width) as usize).min(bins - 1)] += 1;
    }
    let epsilon_hat = distortion_report(&pts, &emb)?.epsilon_hat;
    Ok(JlHistogram { edges: (0..=bins).map(|b| lo + b as f64 * width).collect(), counts, ratios, epsilon_hat })
}
