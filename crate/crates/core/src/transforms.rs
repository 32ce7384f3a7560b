//! Radix-2 kernels: complex FFT, Walsh-Hadamard, circular convolution and
//! Toeplitz multiplication.
//!
//! Every transform is unnormalized in the forward direction, so a single row
//! of the DFT or Hadamard matrix has entries of modulus exactly one. Lengths
//! must be powers of two; nothing here pads silently.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `y_j = Σ_t x_t exp(-2πi jt/d)`
    Forward,
    /// `(1/d) Σ_t x_t exp(+2πi jt/d)`, the exact inverse of `Forward`.
    Inverse,
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

fn require_power_of_two(n: usize) -> Result<()> {
    if is_power_of_two(n) {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

pub fn require_finite(x: &[Complex64]) -> Result<()> {
    match x.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Twiddles `exp(-2πi k/n)` for `k < n/2`.
struct Twiddles {
    table: Vec<Complex64>,
}

impl Twiddles {
    fn new(n: usize) -> Self {
        let table = (0..n / 2)
            .map(|k| {
                let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Twiddles { table }
    }
}

// One lazily built table per log2 size; read-only once initialised.
static TWIDDLES: [OnceLock<Twiddles>; 64] = [const { OnceLock::new() }; 64];

fn twiddles(n: usize) -> &'static Twiddles {
    TWIDDLES[n.trailing_zeros() as usize].get_or_init(|| Twiddles::new(n))
}

fn bit_reverse_permute(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
}

/// Unscaled in-place transform; `conjugate` selects the `+2πi` kernel.
pub(crate) fn transform_unscaled(buf: &mut [Complex64], conjugate: bool) -> Result<()> {
    let n = buf.len();
    require_power_of_two(n)?;
    if n == 1 {
        return Ok(());
    }
    let tw = &twiddles(n).table;
    bit_reverse_permute(buf);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for block in buf.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let w = tw[j * stride];
                let w = if conjugate { w.conj() } else { w };
                let v = *b * w;
                *b = *a - v;
                *a += v;
            }
        }
        len <<= 1;
    }
    Ok(())
}

pub fn fft_in_place(buf: &mut [Complex64], direction: Direction) -> Result<()> {
    match direction {
        Direction::Forward => transform_unscaled(buf, false),
        Direction::Inverse => {
            transform_unscaled(buf, true)?;
            let scale = 1.0 / buf.len() as f64;
            buf.iter_mut().for_each(|z| *z *= scale);
            Ok(())
        }
    }
}

pub fn dft(x: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    require_finite(x)?;
    let mut out = x.to_vec();
    fft_in_place(&mut out, direction)?;
    Ok(out)
}

/// Multiplies by the unnormalized Sylvester-Hadamard matrix in place.
pub fn fwht_in_place(buf: &mut [Complex64]) -> Result<()> {
    let n = buf.len();
    require_power_of_two(n)?;
    let mut half = 1;
    while half < n {
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half <<= 1;
    }
    Ok(())
}

pub fn fwht(x: &[Complex64]) -> Result<Vec<Complex64>> {
    require_finite(x)?;
    let mut out = x.to_vec();
    fwht_in_place(&mut out)?;
    Ok(out)
}

/// `y_j = Σ_i z_{(j-i) mod d} x_i`, computed through the FFT.
pub fn circular_convolve(z: &[Complex64], x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(z.len(), x.len())?;
    require_finite(x)?;
    let zf = dft(z, Direction::Forward)?;
    convolve_with_spectrum(&zf, x)
}

/// Circular convolution against a kernel whose forward DFT is already known.
pub(crate) fn convolve_with_spectrum(kernel_spectrum: &[Complex64], x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(kernel_spectrum.len(), x.len())?;
    let mut xf = dft(x, Direction::Forward)?;
    for (a, k) in xf.iter_mut().zip(kernel_spectrum) {
        *a *= k;
    }
    fft_in_place(&mut xf, Direction::Inverse)?;
    Ok(xf)
}

/// A square Toeplitz matrix `T[j][l] = t_{j-l}` given by its first row and
/// first column.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    first_row: Vec<Complex64>,
    first_column: Vec<Complex64>,
}

impl ToeplitzSpec {
    pub fn new(first_row: Vec<Complex64>, first_column: Vec<Complex64>) -> Result<Self> {
        check_len(first_column.len(), first_row.len())?;
        if first_row.is_empty() {
            return Err(Error::InvalidParameter("toeplitz matrix must be at least 1x1".into()));
        }
        require_finite(&first_row)?;
        require_finite(&first_column)?;
        if first_row[0] != first_column[0] {
            return Err(Error::ToeplitzCorner);
        }
        Ok(ToeplitzSpec { first_row, first_column })
    }

    pub fn size(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }

    pub fn first_column(&self) -> &[Complex64] {
        &self.first_column
    }

    /// Circulant length used for the embedding: the smallest power of two
    /// that is at least `2n`.
    pub fn embedding_len(&self) -> usize {
        (2 * self.size()).next_power_of_two()
    }

    /// Defining vector of a circulant of length `len >= 2n - 1` whose leading
    /// `n x n` block is this matrix: first column, zeros, then the first row's
    /// tail reversed.
    pub fn circulant_vector(&self, len: usize) -> Vec<Complex64> {
        let n = self.size();
        debug_assert!(len + 1 >= 2 * n);
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        c[..n].copy_from_slice(&self.first_column);
        for l in 1..n {
            c[len - l] = self.first_row[l];
        }
        c
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        if row >= col {
            self.first_column[row - col]
        } else {
            self.first_row[col - row]
        }
    }
}

pub fn toeplitz_multiply(t: &ToeplitzSpec, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = t.size();
    check_len(n, x.len())?;
    require_finite(x)?;
    let len = t.embedding_len();
    let spectrum = dft(&t.circulant_vector(len), Direction::Forward)?;
    let mut padded = vec![Complex64::new(0.0, 0.0); len];
    padded[..n].copy_from_slice(x);
    let mut y = convolve_with_spectrum(&spectrum, &padded)?;
    y.truncate(n);
    Ok(y)
}
