//! Real embeddings of complex vectors and matrices: `a + bi ↦ (a, b)` for
//! vectors and `a + bi ↦ [[a, -b], [b, a]]` for matrix entries, so that
//! `f(Ax) = F(A) f(x)` and `‖f(x)‖ = ‖x‖`.

use num_complex::Complex64;

use crate::error::{check_len, Result};
use crate::linalg::CMatrix;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, x.len())?;
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

pub fn complexify_vector(x: &[Complex64]) -> Vec<f64> {
    x.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub fn complexify_matrix(a: &CMatrix) -> RealMatrix {
    let (rows, cols) = (2 * a.rows(), 2 * a.cols());
    let mut data = vec![0.0; rows * cols];
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = a[(i, j)];
            data[2 * i * cols + 2 * j] = z.re;
            data[2 * i * cols + 2 * j + 1] = -z.im;
            data[(2 * i + 1) * cols + 2 * j] = z.im;
            data[(2 * i + 1) * cols + 2 * j + 1] = z.re;
        }
    }
    RealMatrix { rows, cols, data }
}
