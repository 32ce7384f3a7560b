//! Sparse recovery driven only by `apply` / `apply_adjoint`: iterative hard
//! thresholding with unit step, CoSaMP, and the ℓ2/ℓ1 error metrics.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{check_len, Error, Result};
use crate::linalg::{cholesky_solve, gram_of_columns, inner, norm2, CMatrix};
use crate::seed::Rng;
use crate::sketch::SketchOperator;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const LS_REGULARIZATION: f64 = 1e-12;

/// A vector stored as sorted support and aligned nonzero values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SparseSignalDoc")]
pub struct SparseSignal {
    d: usize,
    support: Vec<usize>,
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct SparseSignalDoc {
    d: usize,
    support: Vec<usize>,
    values: Vec<Complex64>,
}

impl TryFrom<SparseSignalDoc> for SparseSignal {
    type Error = Error;

    fn try_from(doc: SparseSignalDoc) -> Result<Self> {
        SparseSignal::new(doc.d, doc.support, doc.values)
    }
}

impl SparseSignal {
    pub fn new(d: usize, support: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        check_len(support.len(), values.len())?;
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("support must be strictly increasing".into()));
        }
        if support.last().is_some_and(|&i| i >= d) {
            return Err(Error::InvalidParameter(format!("support index out of range for d = {d}")));
        }
        if values.contains(&ZERO) {
            return Err(Error::InvalidParameter("explicit zeros are not stored".into()));
        }
        Ok(SparseSignal { d, support, values })
    }

    pub fn zero(d: usize) -> Self {
        SparseSignal { d, support: vec![], values: vec![] }
    }

    /// Keeps the nonzero entries of a dense vector.
    pub fn from_dense(x: &[Complex64]) -> Self {
        let (support, values) = x.iter().enumerate().filter(|(_, v)| **v != ZERO).map(|(i, v)| (i, *v)).unzip();
        SparseSignal { d: x.len(), support, values }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut x = vec![ZERO; self.d];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }
}

/// The `k` largest-magnitude entries; ties go to the smaller index. Zero
/// entries are never kept, so the result may hold fewer than `k` values.
pub fn hard_threshold(x: &[Complex64], k: usize) -> Result<SparseSignal> {
    let d = x.len();
    if k > d {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds d = {d}")));
    }
    let mut order: Vec<usize> = (0..d).filter(|&i| x[i] != ZERO).collect();
    let by_magnitude = |a: &usize, b: &usize| x[*b].norm_sqr().total_cmp(&x[*a].norm_sqr()).then(a.cmp(b));
    if order.len() > k {
        if k == 0 {
            order.clear();
        } else {
            order.select_nth_unstable_by(k - 1, by_magnitude);
            order.truncate(k);
        }
    }
    order.sort_unstable();
    let values = order.iter().map(|&i| x[i]).collect();
    Ok(SparseSignal { d, support: order, values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub estimate: SparseSignal,
    pub iterations_used: usize,
    /// `‖y - Φx̂‖₂`.
    pub residual_norm: f64,
    pub converged: bool,
    /// Iterations after which the residual went up.
    pub residual_increases: Vec<usize>,
}

fn validate(op: &SketchOperator, y: &[Complex64], k: usize, max_iters: usize, tol: f64) -> Result<()> {
    check_len(op.m(), y.len())?;
    if k > op.dim() {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds d = {}", op.dim())));
    }
    if max_iters == 0 {
        return Err(Error::InvalidParameter("max_iters must be at least 1".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tol must be non-negative".into()));
    }
    Ok(())
}

fn relative_change(next: &[Complex64], prev: &[Complex64]) -> f64 {
    let delta = next.iter().zip(prev).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let scale = norm2(next);
    if scale > 0.0 {
        delta / scale
    } else {
        delta
    }
}

fn residual(op: &SketchOperator, y: &[Complex64], x: &[Complex64]) -> Result<Vec<Complex64>> {
    let fx = op.apply(x)?;
    Ok(y.iter().zip(fx).map(|(a, b)| a - b).collect())
}

/// `x ← H_k(x + Φ*(y - Φx))` from `x = 0`, stopping once the relative iterate
/// change is at most `tol`.
pub fn iht(op: &SketchOperator, y: &[Complex64], k: usize, max_iters: usize, tol: f64) -> Result<RecoveryResult> {
    validate(op, y, k, max_iters, tol)?;
    let d = op.dim();
    let mut x = vec![ZERO; d];
    let mut r = y.to_vec();
    let mut last_residual = norm2(&r);
    let mut increases = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let mut step = op.apply_adjoint(&r)?;
        for (s, v) in step.iter_mut().zip(&x) {
            *s += v;
        }
        let next = hard_threshold(&step, k)?.to_dense();
        let change = relative_change(&next, &x);
        x = next;
        r = residual(op, y, &x)?;
        let res = norm2(&r);
        if res > last_residual {
            increases.push(iterations);
        }
        last_residual = res;
        if change <= tol {
            converged = true;
            break;
        }
    }
    Ok(RecoveryResult {
        estimate: SparseSignal::from_dense(&x),
        iterations_used: iterations,
        residual_norm: last_residual,
        converged,
        residual_increases: increases,
    })
}

/// CoSaMP: merge the top `2k` proxy entries with the current support, solve
/// least squares there through regularized normal equations, prune to `k`.
pub fn cosamp(op: &SketchOperator, y: &[Complex64], k: usize, max_iters: usize, tol: f64) -> Result<RecoveryResult> {
    validate(op, y, k, max_iters, tol)?;
    let d = op.dim();
    if 3 * k > d {
        return Err(Error::InvalidParameter(format!("CoSaMP needs 3k <= d, got k = {k}, d = {d}")));
    }
    let mut columns: HashMap<usize, Vec<Complex64>> = HashMap::new();
    let mut x = vec![ZERO; d];
    let mut current = SparseSignal::zero(d);
    let mut r = y.to_vec();
    let mut last_residual = norm2(&r);
    let mut increases = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let proxy = op.apply_adjoint(&r)?;
        let omega = hard_threshold(&proxy, (2 * k).min(d))?;
        let mut merged: Vec<usize> = omega.support().iter().chain(current.support()).copied().collect();
        merged.sort_unstable();
        merged.dedup();

        for &j in &merged {
            if let Entry::Vacant(slot) = columns.entry(j) {
                slot.insert(op.column(j)?);
            }
        }
        let cols: Vec<Vec<Complex64>> = merged.iter().map(|j| columns[j].clone()).collect();
        let mut normal = gram_of_columns(&cols);
        for i in 0..merged.len() {
            normal[(i, i)] += LS_REGULARIZATION;
        }
        let rhs: Vec<Complex64> = cols.iter().map(|c| inner(c, y)).collect();
        let Ok(coeffs) = cholesky_solve(&normal, &rhs) else {
            break;
        };

        let mut wide = vec![ZERO; d];
        for (&j, v) in merged.iter().zip(&coeffs) {
            wide[j] = *v;
        }
        current = hard_threshold(&wide, k)?;
        let next = current.to_dense();
        let change = relative_change(&next, &x);
        x = next;
        r = residual(op, y, &x)?;
        let res = norm2(&r);
        if res > last_residual {
            increases.push(iterations);
        }
        last_residual = res;
        if change <= tol {
            converged = true;
            break;
        }
    }
    Ok(RecoveryResult {
        estimate: SparseSignal::from_dense(&x),
        iterations_used: iterations,
        residual_norm: last_residual,
        converged,
        residual_increases: increases,
    })
}

fn serialize_ratio<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

/// Recovery error next to the best `k`-term ℓ1 tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2L1Metrics {
    pub err_l2: f64,
    /// `err_l2 / (‖x - H_k(x)‖₁ / √k)`; `inf` when the tail vanishes but the
    /// error does not, `0` when both vanish.
    #[serde(serialize_with = "serialize_ratio")]
    pub head_tail_ratio: f64,
}

pub fn l2l1_metrics(true_x: &[Complex64], estimate: &SparseSignal, k: usize) -> Result<L2L1Metrics> {
    check_len(true_x.len(), estimate.dim())?;
    if k == 0 || k > true_x.len() {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in [1, {}]", true_x.len())));
    }
    let est = estimate.to_dense();
    let err_l2 = true_x.iter().zip(&est).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let head = hard_threshold(true_x, k)?;
    let mut tail: Vec<Complex64> = true_x.to_vec();
    for &i in head.support() {
        tail[i] = ZERO;
    }
    let tail_l1: f64 = tail.iter().map(|z| z.norm()).sum();
    let head_tail_ratio = if tail_l1 == 0.0 {
        if err_l2 == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        err_l2 / (tail_l1 / (k as f64).sqrt())
    };
    Ok(L2L1Metrics { err_l2, head_tail_ratio })
}

/// `k`-sparse signal with a uniform random support and standard normal real
/// values.
pub fn random_sparse_signal(d: usize, k: usize, rng: &mut Rng) -> Result<SparseSignal> {
    if k > d {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds d = {d}")));
    }
    let mut support = rand::seq::index::sample(rng, d, k).into_vec();
    support.sort_unstable();
    let values = support
        .iter()
        .map(|_| loop {
            let v: f64 = rng.sample(StandardNormal);
            if v != 0.0 {
                break Complex64::new(v, 0.0);
            }
        })
        .collect();
    SparseSignal::new(d, support, values)
}

/// Compressible signal: the `i`-th largest magnitude is `(i+1)^{-decay}`, with
/// random signs and positions.
pub fn power_law_signal(d: usize, decay: f64, rng: &mut Rng) -> Vec<Complex64> {
    let positions = rand::seq::index::sample(rng, d, d).into_vec();
    let mut x = vec![ZERO; d];
    for (rank, &pos) in positions.iter().enumerate() {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        x[pos] = Complex64::new(sign * ((rank + 1) as f64).powf(-decay), 0.0);
    }
    x
}

/// Adds `N(0, std²)` independently to the real and imaginary part of each
/// measurement.
pub fn add_noise(y: &mut [Complex64], std: f64, rng: &mut Rng) {
    if std == 0.0 {
        return;
    }
    for v in y.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v += Complex64::new(std * re, std * im);
    }
}

/// Measurement matrix restricted to `support`, assembled from operator columns.
pub fn restricted_matrix(op: &SketchOperator, support: &[usize]) -> Result<CMatrix> {
    let cols = support.iter().map(|&j| op.column(j)).collect::<Result<Vec<_>>>()?;
    CMatrix::from_columns(op.m(), &cols)
}
