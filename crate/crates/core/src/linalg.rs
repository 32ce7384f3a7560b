//! Small dense complex linear algebra used by the oracles, the RIP
//! enumerators and CoSaMP's least-squares step.

use num_complex::Complex64;

use crate::error::{check_len, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len(cols, r.len())?;
            data.extend_from_slice(r);
        }
        Ok(CMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            check_len(rows, col.len())?;
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A* y` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.rows, y.len())?;
        let mut out = vec![ZERO; self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * yi;
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut t = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        check_len(self.cols, other.rows)?;
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Gram matrix `A* A`, built column pair by column pair with [`inner`].
    pub fn gram(&self) -> CMatrix {
        gram_of_columns(&self.columns())
    }

    pub fn submatrix_columns(&self, support: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, support.len());
        for i in 0..self.rows {
            for (c, &j) in support.iter().enumerate() {
                m[(i, c)] = self[(i, j)];
            }
        }
        m
    }

    /// Principal submatrix on `idx`.
    pub fn principal(&self, idx: &[usize]) -> CMatrix {
        let k = idx.len();
        let mut m = CMatrix::zeros(k, k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `⟨a, b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm2_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Gram matrix of a list of equal-length columns. Entry `(i, j)` is
/// `inner(col_i, col_j)`, so any two callers holding bitwise-equal columns get
/// bitwise-equal Gram entries.
pub fn gram_of_columns(columns: &[Vec<Complex64>]) -> CMatrix {
    let n = columns.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = inner(&columns[i], &columns[j]);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    g
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// returned in ascending order. Only the upper triangle's conjugate symmetry
/// is assumed; the diagonal is read as real.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.rows();
    assert_eq!(n, h.cols(), "hermitian_eigenvalues needs a square matrix");
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    jacobi_in_place(&mut a);
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_extremes(h: &CMatrix) -> (f64, f64) {
    let n = h.rows();
    match n {
        0 => (0.0, 0.0),
        1 => (h[(0, 0)].re, h[(0, 0)].re),
        2 => {
            let (p, q) = (h[(0, 0)].re, h[(1, 1)].re);
            let mid = 0.5 * (p + q);
            let rad = (0.25 * (p - q) * (p - q) + h[(0, 1)].norm_sqr()).sqrt();
            (mid - rad, mid + rad)
        }
        _ => {
            let ev = hermitian_eigenvalues(h);
            (ev[0], ev[n - 1])
        }
    }
}

fn off_diagonal_sqr(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    s
}

fn jacobi_in_place(a: &mut CMatrix) {
    let n = a.rows();
    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return;
    }
    let target = total * 1e-32;
    for _sweep in 0..100 {
        if off_diagonal_sqr(a) <= target {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(a, p, q);
            }
        }
    }
}

// Zeroes a[p][q]: first a diagonal phase on q makes the pivot real, then a
// real Givens rotation finishes the 2x2 problem.
fn rotate(a: &mut CMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    for j in 0..n {
        a[(q, j)] *= phase;
        a[(j, q)] *= phase.conj();
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for j in 0..n {
        if j == p || j == q {
            continue;
        }
        let ajp = a[(j, p)];
        let ajq = a[(j, q)];
        let njp = ajp * c - ajq * s;
        let njq = ajp * s + ajq * c;
        a[(j, p)] = njp;
        a[(p, j)] = njp.conj();
        a[(j, q)] = njq;
        a[(q, j)] = njq.conj();
    }
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
}

/// Solves `H z = b` for Hermitian positive definite `H` by Cholesky.
pub fn cholesky_solve(h: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = h.rows();
    check_len(n, h.cols())?;
    check_len(n, b.len())?;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidParameter("matrix is not positive definite".into()));
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    Ok(y)
}
