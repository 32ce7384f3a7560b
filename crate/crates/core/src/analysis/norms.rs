//! Induced matrix norms `‖A‖_{1→1}`, `‖A‖_{∞→∞}` and `‖A‖_{2→2}`, which satisfy
//! `‖A‖²_{2→2} ≤ ‖A‖_{1→1} ‖A‖_{∞→∞}`.

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigenvalues, norm2, CMatrix};
use crate::seed::rng_from_seed;

/// Gram matrices up to this size are diagonalised directly.
pub const DIRECT_EIGEN_LIMIT: usize = 64;
const POWER_MAX_ITERS: usize = 10_000;
const POWER_TOL: f64 = 1e-8;
const POWER_START_SEED: u64 = 0x0005_eed0_fa11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorNorms {
    /// Largest column absolute sum.
    pub one_to_one: f64,
    /// Largest row absolute sum.
    pub inf_to_inf: f64,
    pub two_to_two: f64,
}

pub fn operator_norms(a: &CMatrix) -> OperatorNorms {
    let one_to_one = (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let inf_to_inf = (0..a.rows())
        .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    OperatorNorms { one_to_one, inf_to_inf, two_to_two: spectral_norm(a) }
}

pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    // A*A and AA* share their nonzero spectrum; take the smaller one.
    let small = if a.cols() <= a.rows() { a.gram() } else { a.adjoint().gram() };
    if small.rows() <= DIRECT_EIGEN_LIMIT {
        let top = hermitian_eigenvalues(&small).last().copied().unwrap_or(0.0);
        return top.max(0.0).sqrt();
    }
    power_iteration(&small)
}

fn power_iteration(h: &CMatrix) -> f64 {
    let mut rng = rng_from_seed(POWER_START_SEED);
    let mut v: Vec<Complex64> =
        (0..h.cols()).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let n = norm2(&v);
        if n == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|z| *z /= n);
        let w = h.mul_vec(&v).expect("square Gram matrix");
        let next = norm2(&w);
        let done = (next - lambda).abs() <= POWER_TOL * next;
        lambda = next;
        v = w;
        if done {
            break;
        }
    }
    lambda.sqrt()
}
