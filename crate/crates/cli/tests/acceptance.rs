//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed. Reference values come from the naive
//! implementations in the core crate's test helpers, never from the fast
//! kernels under test.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use fastsketch::analysis::{
    complexify_matrix, complexify_vector, exact_rip_constant, exact_rip_constant_with_cap, mc_rip_lower_bound,
    operator_norms,
};
use fastsketch::io::write_point_set_file;
use fastsketch::jl::{distortion_report, jl_embed, PointSet};
use fastsketch::linalg::CMatrix;
use fastsketch::recovery::{cosamp, iht, random_sparse_signal};
use fastsketch::seed::{derive_seed, stream};
use fastsketch::sketch::build_sketch;
use fastsketch::transforms::{circular_convolve, dft, fwht, toeplitz_multiply, Direction, ToeplitzSpec};
use fastsketch::{Complex64, EnsembleKind, SignTable, SketchOperator};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const KINDS: [EnsembleKind; 4] = [
    EnsembleKind::PartialFourier,
    EnsembleKind::PartialHadamard,
    EnsembleKind::PartialCirculant,
    EnsembleKind::DenseGaussian,
];

fn transforms_match_naive() -> Outcome {
    let mut worst: f64 = 0.0;
    for &n in &[8usize, 64, 256] {
        let mut r = rng(n as u64);
        let h = sylvester(n);
        for _ in 0..100 {
            let x = random_vector(&mut r, n);
            let z = random_vector(&mut r, n);

            let fx = dft(&x, Direction::Forward).unwrap();
            worst = worst.max(rel_err(&fx, &naive_dft(&x, -1.0)));
            worst = worst.max(rel_err(&dft(&fx, Direction::Inverse).unwrap(), &x));
            let parseval = (norm(&fx).powi(2) - n as f64 * norm(&x).powi(2)).abs() / (n as f64 * norm(&x).powi(2));
            worst = worst.max(parseval);

            let hx: Vec<Complex64> =
                h.iter().map(|row| row.iter().zip(&x).map(|(a, v)| v * *a).sum()).collect();
            worst = worst.max(rel_err(&fwht(&x).unwrap(), &hx));

            worst = worst.max(rel_err(&circular_convolve(&z, &x).unwrap(), &naive_convolve(&z, &x)));

            let mut col = random_vector(&mut r, n);
            let row = random_vector(&mut r, n);
            col[0] = row[0];
            let t = ToeplitzSpec::new(row.clone(), col.clone()).unwrap();
            let dense: Vec<Vec<Complex64>> = (0..n)
                .map(|j| (0..n).map(|l| if j >= l { col[j - l] } else { row[l - j] }).collect())
                .collect();
            worst = worst.max(rel_err(&toeplitz_multiply(&t, &x).unwrap(), &mat_vec(&dense, &x)));
        }
    }
    check(worst <= 1e-10, format!("worst relative error {worst:.2e} (limit 1e-10)"))
}

/// `Φ` written out from the bucket formula. Hadamard entries use the
/// `(-1)^popcount(t & j)` closed form so no matrix has to be stored.
fn reference_rows(op: &SketchOperator) -> Vec<Vec<Complex64>> {
    if op.kind() != EnsembleKind::PartialHadamard {
        return reference_sketch(op);
    }
    let (d, m, bsize) = (op.dim(), op.m(), op.bucket_size());
    let idx = op.source().indices().unwrap();
    let scale = 1.0 / ((m * bsize) as f64).sqrt();
    (0..m)
        .map(|b| {
            (0..d)
                .map(|j| {
                    let s: f64 = (0..bsize)
                        .map(|i| {
                            let t = idx[b * bsize + i];
                            let sign = if (t & j).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                            sign * op.sign_table().get(b, i) as f64
                        })
                        .sum();
                    c(s * scale, 0.0)
                })
                .collect()
        })
        .collect()
}

fn construction_fidelity() -> Outcome {
    let (d, m, b) = (256, 16, 8);
    let (mut forward, mut adjoint): (f64, f64) = (0.0, 0.0);
    for kind in KINDS {
        let mut r = rng(1000 + kind as u64);
        for seed in 0..100u64 {
            let op = build_sketch(d, m, b, kind, seed).unwrap();
            let x = random_vector(&mut r, d);
            let z = random_vector(&mut r, m);
            let phi = reference_rows(&op);
            let fast = op.apply(&x).unwrap();
            forward = forward.max(max_abs_diff(&fast, &mat_vec(&phi, &x)));
            forward = forward.max(max_abs_diff(&fast, &op.densify().unwrap().mul_vec(&x).unwrap()));
            let back = op.apply_adjoint(&z).unwrap();
            let lhs = dot(&fast, &z);
            let rhs = dot(&x, &back);
            adjoint = adjoint.max((lhs - rhs).norm() / (norm(&fast) * norm(&z)).max(1.0));
        }
    }
    check(
        forward <= 1e-9 && adjoint <= 1e-10,
        format!("max |Φx - apply| = {forward:.2e} (limit 1e-9), adjoint gap {adjoint:.2e} (limit 1e-10)"),
    )
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn unbiasedness() -> Outcome {
    let (d, m, b) = (64, 4, 4);
    let draws = 10_000;
    let mut r = rng(3);
    let mut x = random_vector(&mut r, d);
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut details = Vec::new();
    let mut ok = true;

    // Fixed source, fresh signs: the unnormalized energy averages to ‖Ax‖².
    for kind in KINDS {
        let fixed = build_sketch(d, m, b, kind, 77).unwrap();
        let circ = fixed.source().signs().unwrap_or(&[]).to_vec();
        let dense = fixed.source().dense_entries().unwrap_or(&[]).to_vec();
        let ax_sq: f64 = (0..m * b)
            .map(|row| {
                let t = fixed.source().indices().map_or(row, |idx| idx[row]);
                let a = structured_row(kind, d, t, &circ, &dense);
                a.iter().zip(&x).map(|(u, v)| u * v).sum::<Complex64>().norm_sqr()
            })
            .sum();
        let samples: Vec<f64> = (0..draws as u64)
            .map(|s| {
                let signs = SignTable::sample(m, b, &mut stream(s, 0, "acceptance-signs")).unwrap();
                let op = SketchOperator::from_parts(fixed.source().clone(), signs).unwrap();
                norm(&op.apply(&x).unwrap()).powi(2) * (m * b) as f64
            })
            .collect();
        let (mean, se) = mean_and_se(&samples);
        let z = (mean - ax_sq).abs() / se;
        ok &= z <= 5.0;
        details.push(format!("{} signs z={z:.2}", kind.as_str()));
    }

    // Source and signs both random: normalized energy averages to ‖x‖² = 1.
    for kind in KINDS {
        let samples: Vec<f64> = (0..draws as u64)
            .map(|s| norm(&build_sketch(d, m, b, kind, derive_seed(s, 0, "acceptance")).unwrap().apply(&x).unwrap()).powi(2))
            .collect();
        let (mean, se) = mean_and_se(&samples);
        let z = (mean - 1.0).abs() / se;
        ok &= z <= 5.0;
        details.push(format!("{} full z={z:.2}", kind.as_str()));
    }
    check(ok, format!("{} (limit 5 standard errors)", details.join(", ")))
}

fn exact_vs_monte_carlo() -> Outcome {
    let (d, k, m, b) = (16, 2, 8, 2);
    let (mut worst_gap, mut violations): (f64, usize) = (0.0, 0);
    for seed in 0..50u64 {
        let op = build_sketch(d, m, b, EnsembleKind::PartialFourier, seed).unwrap();
        let exact = exact_rip_constant(&op.densify().unwrap(), k).unwrap();
        let brute = brute_force_rip(&reference_sketch(&op), k);
        worst_gap = worst_gap.max((exact.epsilon - brute).abs());
        let by_columns = exact_rip_constant(&op.matrix_by_columns().unwrap(), k).unwrap();
        let mc = mc_rip_lower_bound(&op, k, 200, &mut stream(seed, 0, "acceptance-mc")).unwrap();
        if mc.epsilon > by_columns.epsilon {
            violations += 1;
        }
    }
    check(
        worst_gap <= 1e-8 && violations == 0,
        format!("|exact - brute force| ≤ {worst_gap:.2e} (limit 1e-8), MC above exact on {violations}/50 seeds"),
    )
}

fn rip_trend() -> Outcome {
    let (d, k, b) = (256, 4, 8);
    let ms = [16usize, 32, 64, 128];
    let medians: Vec<f64> = ms
        .iter()
        .map(|&m| {
            let eps: Vec<f64> = (0..10u64)
                .map(|seed| {
                    let op = build_sketch(d, m, b, EnsembleKind::PartialFourier, derive_seed(seed, 0, "operator")).unwrap();
                    exact_rip_constant_with_cap(&op.densify().unwrap(), k, u128::MAX).unwrap().epsilon
                })
                .collect();
            median(eps)
        })
        .collect();
    let inv = inversions(&medians);
    let shown: Vec<String> = ms.iter().zip(&medians).map(|(m, e)| format!("m={m}: {e:.3}")).collect();
    check(inv <= 1, format!("median exact ε {} ; {inv} inversion(s) (limit 1)", shown.join(", ")))
}

fn recovery() -> Outcome {
    let (d, k, m, b) = (1024, 10, 200, 16);
    let trials = 50u64;
    let (mut iht_ok, mut cosamp_ok) = (0usize, 0usize);
    for t in 0..trials {
        let op = build_sketch(d, m, b, EnsembleKind::PartialFourier, derive_seed(2024, t, "operator")).unwrap();
        let x = random_sparse_signal(d, k, &mut stream(2024, t, "signal")).unwrap().to_dense();
        let y = op.apply(&x).unwrap();
        let rel = |est: Vec<Complex64>| {
            let diff: Vec<Complex64> = est.iter().zip(&x).map(|(a, b)| a - b).collect();
            norm(&diff) / norm(&x)
        };
        if rel(iht(&op, &y, k, 500, 1e-10).unwrap().estimate.to_dense()) <= 1e-6 {
            iht_ok += 1;
        }
        if rel(cosamp(&op, &y, k, 500, 1e-10).unwrap().estimate.to_dense()) <= 1e-6 {
            cosamp_ok += 1;
        }
    }
    let (ri, rc) = (iht_ok as f64 / trials as f64, cosamp_ok as f64 / trials as f64);
    check(
        ri >= 0.9 && (ri - rc).abs() <= 0.10,
        format!("IHT {iht_ok}/{trials}, CoSaMP {cosamp_ok}/{trials} at relative error ≤ 1e-6"),
    )
}

fn gaussian_points(n: usize, d: usize, seed: u64) -> PointSet {
    let mut r = rng(seed);
    let rows: Vec<Vec<f64>> =
        (0..n).map(|_| (0..d).map(|_| r.sample::<f64, _>(rand_distr::StandardNormal)).collect()).collect();
    PointSet::from_real(d, rows).unwrap()
}

fn jl_distortion() -> Outcome {
    let (n, d, b) = (50, 1024, 16);
    let pts = gaussian_points(n, d, 7);
    let eps_for = |m: usize, seed: u64| -> f64 {
        let op = build_sketch(d, m, b, EnsembleKind::PartialFourier, derive_seed(seed, 0, "operator")).unwrap();
        let emb = jl_embed(&op, &pts, derive_seed(seed, 0, "jl-signs")).unwrap();
        distortion_report(&pts, &emb).unwrap().epsilon_hat
    };
    let at_256: Vec<f64> = (0..20).map(|s| eps_for(256, s)).collect();
    let within = at_256.iter().filter(|&&e| e <= 0.5).count();
    let ms = [64usize, 128, 256, 512];
    let medians: Vec<f64> = ms.iter().map(|&m| median((0..20).map(|s| eps_for(m, s)).collect())).collect();
    let inv = inversions(&medians);
    let shown: Vec<String> = ms.iter().zip(&medians).map(|(m, e)| format!("m={m}: {e:.3}")).collect();
    check(
        within * 10 >= 20 * 9 && inv <= 1,
        format!("ε̂ ≤ 0.5 on {within}/20 seeds at m=256; median ε̂ {} ; {inv} inversion(s)", shown.join(", ")),
    )
}

fn random_cmatrix(r: &mut TestRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_row_major(rows, cols, random_vector(r, rows * cols)).unwrap()
}

fn norm_and_complexification_identities() -> Outcome {
    let mut r = rng(8);
    let mut norm_violations = 0;
    for i in 0..200 {
        // a few shapes past the direct-eigensolver limit exercise power iteration
        let (rows, cols) = if i % 20 == 0 { (r.random_range(65..120), r.random_range(65..120)) } else { (r.random_range(1..40), r.random_range(1..40)) };
        let n = operator_norms(&random_cmatrix(&mut r, rows, cols));
        if n.two_to_two.powi(2) > n.one_to_one * n.inf_to_inf * (1.0 + 1e-9) {
            norm_violations += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (rows, cols) = (r.random_range(1..30), r.random_range(1..30));
        let a = random_cmatrix(&mut r, rows, cols);
        let x = random_vector(&mut r, cols);
        let lhs = complexify_vector(&a.mul_vec(&x).unwrap());
        let rhs = complexify_matrix(&a).mul_vec(&complexify_vector(&x)).unwrap();
        let scale = lhs.iter().map(|v| v.abs()).fold(1.0, f64::max);
        worst = worst.max(lhs.iter().zip(&rhs).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale);
        let fx = complexify_vector(&x);
        let nf = fx.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max((nf - norm(&x)).abs() / norm(&x));
    }
    check(
        norm_violations == 0 && worst <= 1e-12,
        format!("norm inequality violated on {norm_violations}/200; complexification error {worst:.2e} (limit 1e-12)"),
    )
}

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_fastsketch")
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(binary()).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("fastsketch {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn fast_multiply_scaling() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for kind in ["fourier", "circulant"] {
        let out = dir.path().join(kind);
        run_cli(&[
            "bench", "--kind", kind, "--d", "16384..65536", "--m", "256", "--B", "16", "--trials", "9", "--seed", "1",
            "--out-dir", out.to_str().unwrap(),
        ])?;
        let mut reader = csv::Reader::from_path(out.join("bench.csv")).map_err(|e| e.to_string())?;
        let headers = reader.headers().map_err(|e| e.to_string())?.clone();
        let col = headers.iter().position(|h| h == "apply_doubling_ratio").ok_or("no doubling-ratio column")?;
        let ratios: Vec<f64> = reader
            .records()
            .filter_map(|rec| rec.ok()?.get(col)?.parse().ok())
            .collect();
        if ratios.len() != 2 {
            return Err(format!("expected two doubling ratios for {kind}, got {ratios:?}"));
        }
        worst = ratios.iter().copied().fold(worst, f64::max);
        details.push(format!("{kind} {:.2}, {:.2}", ratios[0], ratios[1]));
    }
    check(worst <= 3.0, format!("apply doubling ratios {} (limit 3.0)", details.join("; ")))
}

fn is_timing_key(key: &str) -> bool {
    key == "wall_time" || key.ends_with("_seconds") || key.ends_with("_ratio") || key.ends_with("_timings")
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !is_timing_key(k));
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn csv_without_timing(path: &Path) -> Result<Vec<Vec<String>>, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let Some(header) = rows.first() else { return Ok(rows) };
    let keep: Vec<bool> = header.iter().map(|h| !is_timing_key(h)).collect();
    Ok(rows
        .iter()
        .map(|row| row.iter().zip(keep.iter().chain(std::iter::repeat(&true))).filter(|(_, &k)| k).map(|(v, _)| v.clone()).collect())
        .collect())
}

/// Compares every artifact of two output directories, timing fields aside.
fn compare_dirs(a: &Path, b: &Path) -> Result<usize, String> {
    let list = |p: &Path| -> Result<Vec<PathBuf>, String> {
        let mut v: Vec<PathBuf> = std::fs::read_dir(p).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
        v.sort();
        Ok(v)
    };
    let (fa, fb) = (list(a)?, list(b)?);
    let names = |v: &[PathBuf]| v.iter().map(|p| p.file_name().unwrap().to_owned()).collect::<Vec<_>>();
    if names(&fa) != names(&fb) {
        return Err(format!("artifact lists differ: {:?} vs {:?}", names(&fa), names(&fb)));
    }
    for (pa, pb) in fa.iter().zip(&fb) {
        let same = match pa.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let load = |p: &Path| -> Result<Value, String> {
                    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    strip_timing(&mut v);
                    Ok(v)
                };
                load(pa)? == load(pb)?
            }
            Some("csv") => csv_without_timing(pa)? == csv_without_timing(pb)?,
            _ => std::fs::read(pa).map_err(|e| e.to_string())? == std::fs::read(pb).map_err(|e| e.to_string())?,
        };
        if !same {
            return Err(format!("{} differs between runs", pa.display()));
        }
    }
    Ok(fa.len())
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = dir.path();
    let forward = root.join("forward.csv");
    let backward = root.join("backward.csv");
    let mut r = rng(10);
    write_point_set_file(&forward, &PointSet::new(64, true, (0..5).map(|_| random_vector(&mut r, 64)).collect()).unwrap())
        .map_err(|e| e.to_string())?;
    write_point_set_file(&backward, &gaussian_points(4, 8, 11)).map_err(|e| e.to_string())?;
    let (fwd, bwd) = (forward.to_str().unwrap().to_string(), backward.to_str().unwrap().to_string());

    let experiments: Vec<(&str, Vec<&str>)> = vec![
        ("plan", vec!["plan", "--d", "1024", "--k", "16", "--epsilon", "0.5", "--kind", "fourier"]),
        ("build", vec!["build", "--d", "64", "--m", "8", "--B", "4", "--kind", "circulant", "--seed", "5"]),
        ("apply", vec!["apply", "--d", "64", "--m", "8", "--B", "4", "--kind", "hadamard", "--seed", "5", "--input", &fwd]),
        ("apply_adjoint", vec!["apply", "--d", "64", "--m", "8", "--B", "4", "--seed", "5", "--adjoint", "--input", &bwd]),
        ("rip_exact", vec!["rip", "--d", "16", "--k", "2", "--m", "8", "--B", "2", "--kind", "fourier", "--method", "exact", "--seed", "7"]),
        ("rip_mc", vec!["rip", "--d", "64", "--k", "3", "--m", "16", "--B", "4", "--method", "mc", "--trials", "300", "--seed", "auto"]),
        ("jl", vec!["jl", "--d", "128", "--m", "32", "--B", "4", "--trials", "4", "--points", "12", "--epsilon", "0.5", "--seed", "9"]),
        ("jl_input", vec!["jl", "--d", "64", "--m", "16", "--B", "2", "--kind", "gaussian", "--trials", "3", "--input", &fwd, "--seed", "9"]),
        ("recover", vec!["recover", "--d", "256", "--m", "64", "--B", "4", "--k", "4", "--trials", "4", "--seed", "11"]),
        ("recover_noisy", vec![
            "recover", "--d", "256", "--m", "64", "--B", "4", "--k", "8", "--trials", "3", "--signal", "power_law",
            "--noise", "0.01", "--solver", "cosamp", "--kind", "circulant", "--seed", "12",
        ]),
        ("bench", vec!["bench", "--d", "1024..2048", "--m", "16", "--B", "4", "--trials", "5", "--reps", "1", "--seed", "2"]),
    ];
    let mut compared = 0;
    for (name, args) in &experiments {
        let first = root.join("first").join(name);
        let second = root.join("second").join(name);
        let mut a1: Vec<&str> = args.clone();
        a1.extend(["--out-dir", first.to_str().unwrap()]);
        let stdout = run_cli(&a1)?;
        let command = args[0];
        let report = first.join(format!("{command}.json"));
        if std::fs::read_to_string(&report).map_err(|e| e.to_string())? != stdout {
            return Err(format!("{name}: stdout differs from {}", report.display()));
        }
        run_cli(&[command, "--config", report.to_str().unwrap(), "--out-dir", second.to_str().unwrap()])?;
        compared += compare_dirs(&first, &second).map_err(|e| format!("{name}: {e}"))?;
    }
    check(true, format!("{} experiments re-run from their embedded configs, {compared} artifacts identical", experiments.len()))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "transform correctness", Duration::from_secs(5), transforms_match_naive),
        (2, "construction fidelity", Duration::from_secs(10), construction_fidelity),
        (3, "unbiasedness", Duration::from_secs(60), unbiasedness),
        (4, "exact vs Monte-Carlo RIP", Duration::from_secs(30), exact_vs_monte_carlo),
        (5, "RIP trend in m", Duration::from_secs(300), rip_trend),
        (6, "sparse recovery", Duration::from_secs(300), recovery),
        (7, "JL distortion", Duration::from_secs(300), jl_distortion),
        (8, "norm and complexification identities", Duration::from_secs(10), norm_and_complexification_identities),
        (9, "fast-multiply scaling", Duration::from_secs(120), fast_multiply_scaling),
        (10, "reproducibility from embedded config", Duration::MAX, reproducibility),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut results = BTreeMap::new();
    for (id, name, budget, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.1?}, budget {budget:.0?}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {id:>2} [{name}]: {tag} — {detail} ({:.1}s)", elapsed.as_secs_f64());
        results.insert(id, outcome.is_ok());
    }
    let failed = results.values().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

