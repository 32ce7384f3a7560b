//! Naive reference implementations shared by the integration tests. Nothing
//! here calls into the fast kernels of the crate under test.

#![allow(dead_code)]

use std::f64::consts::PI;

use fastsketch::{Complex64, EnsembleKind, SketchOperator};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_vector(rng: &mut TestRng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

pub fn random_signs(rng: &mut TestRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `‖a - b‖∞ / max(‖b‖∞, tiny)`.
pub fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    max_abs_diff(a, b) / scale
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|t| {
                    let phase = sign * 2.0 * PI * ((j * t) % n) as f64 / n as f64;
                    x[t] * c(phase.cos(), phase.sin())
                })
                .sum()
        })
        .collect()
}

/// Sylvester–Hadamard matrix built by literal block doubling.
pub fn sylvester(n: usize) -> Vec<Vec<f64>> {
    let mut h = vec![vec![1.0]];
    while h.len() < n {
        let s = h.len();
        let mut next = vec![vec![0.0; 2 * s]; 2 * s];
        for i in 0..s {
            for j in 0..s {
                next[i][j] = h[i][j];
                next[i][j + s] = h[i][j];
                next[i + s][j] = h[i][j];
                next[i + s][j + s] = -h[i][j];
            }
        }
        h = next;
    }
    h
}

pub fn naive_convolve(z: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let d = x.len();
    (0..d).map(|j| (0..d).map(|i| z[(j + d - i) % d] * x[i]).sum()).collect()
}

pub fn mat_vec(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum()).collect()
}

pub fn adjoint_vec(a: &[Vec<Complex64>], y: &[Complex64]) -> Vec<Complex64> {
    let cols = a[0].len();
    (0..cols).map(|j| a.iter().zip(y).map(|(row, v)| row[j].conj() * v).sum()).collect()
}

/// Row `t` of the structured matrix written out from its definition.
pub fn structured_row(kind: EnsembleKind, d: usize, payload_index: usize, circ: &[i8], dense: &[f64]) -> Vec<Complex64> {
    match kind {
        EnsembleKind::PartialFourier => {
            let t = payload_index;
            (0..d)
                .map(|j| {
                    let ang = -2.0 * PI * (t as f64) * (j as f64) / d as f64;
                    c(ang.cos(), ang.sin())
                })
                .collect()
        }
        EnsembleKind::PartialHadamard => {
            let h = sylvester(d);
            h[payload_index].iter().map(|&v| c(v, 0.0)).collect()
        }
        EnsembleKind::PartialCirculant => {
            let i = payload_index;
            (0..d).map(|j| c(circ[((i as isize - j as isize).rem_euclid(d as isize)) as usize] as f64, 0.0)).collect()
        }
        EnsembleKind::DenseGaussian => {
            let i = payload_index;
            dense[i * d..(i + 1) * d].iter().map(|&v| c(v, 0.0)).collect()
        }
    }
}

/// `Φ` assembled row by row from the bucket formula.
pub fn reference_sketch(op: &SketchOperator) -> Vec<Vec<Complex64>> {
    let src = op.source();
    let (d, m, bsize) = (op.dim(), op.m(), op.bucket_size());
    let circ = src.signs().unwrap_or(&[]).to_vec();
    let dense = src.dense_entries().unwrap_or(&[]).to_vec();
    let scale = 1.0 / ((m * bsize) as f64).sqrt();
    (0..m)
        .map(|b| {
            let mut row = vec![c(0.0, 0.0); d];
            for i in 0..bsize {
                let r = b * bsize + i;
                let payload_index = src.indices().map_or(r, |idx| idx[r]);
                let a = structured_row(op.kind(), d, payload_index, &circ, &dense);
                let sigma = op.sign_table().get(b, i) as f64;
                for (acc, v) in row.iter_mut().zip(a) {
                    *acc += v * sigma * scale;
                }
            }
            row
        })
        .collect()
}

pub fn to_nalgebra(rows: &[Vec<Complex64>]) -> DMatrix<nalgebra::Complex<f64>> {
    let (r, cols) = (rows.len(), rows[0].len());
    DMatrix::from_fn(r, cols, |i, j| nalgebra::Complex::new(rows[i][j].re, rows[i][j].im))
}

/// Exhaustive RIP constant via nalgebra singular values, no pruning.
pub fn brute_force_rip(rows: &[Vec<Complex64>], k: usize) -> f64 {
    let a = to_nalgebra(rows);
    let d = a.ncols();
    let mut best: f64 = 0.0;
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        let sub = a.select_columns(comb.iter());
        let sv = sub.singular_values();
        let smax = sv.max();
        // fewer rows than k leaves zero singular values unreported
        let smin = if sub.nrows() < k { 0.0 } else { sv.min() };
        best = best.max(smax * smax - 1.0).max(1.0 - smin * smin);
        let mut pos = k;
        loop {
            if pos == 0 {
                return best;
            }
            pos -= 1;
            if comb[pos] < d - k + pos {
                comb[pos] += 1;
                for q in pos + 1..k {
                    comb[q] = comb[q - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Number of adjacent pairs where the sequence goes up.
pub fn inversions(seq: &[f64]) -> usize {
    seq.windows(2).filter(|w| w[1] > w[0]).count()
}
