//! Structured row ensembles `A ∈ C^{M×d}`.
//!
//! Fourier and Hadamard sources keep `M` row indices drawn uniformly with
//! replacement; rows are those of the unnormalized transform, so every entry
//! has modulus one and `E|⟨a_i, x⟩|² = ‖x‖²`. The partial circulant source keeps
//! a Rademacher vector `ε` and the first `M` rows of its circulant matrix.
//! Indices are zero-based throughout.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::CMatrix;
use crate::seed::Rng;
use crate::transforms::{
    self, convolve_with_spectrum, dft, fft_in_place, fwht_in_place, is_power_of_two, require_finite, Direction,
};

/// Default limit on `rows * cols` for any densified matrix.
pub const DEFAULT_DENSIFY_CAP: u128 = 1 << 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    PartialFourier,
    PartialHadamard,
    PartialCirculant,
    DenseGaussian,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 4] = [
        EnsembleKind::PartialFourier,
        EnsembleKind::PartialHadamard,
        EnsembleKind::PartialCirculant,
        EnsembleKind::DenseGaussian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::PartialFourier => "partial_fourier",
            EnsembleKind::PartialHadamard => "partial_hadamard",
            EnsembleKind::PartialCirculant => "partial_circulant",
            EnsembleKind::DenseGaussian => "dense_gaussian",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" | "partial_fourier" => Ok(EnsembleKind::PartialFourier),
            "hadamard" | "partial_hadamard" => Ok(EnsembleKind::PartialHadamard),
            "circulant" | "partial_circulant" => Ok(EnsembleKind::PartialCirculant),
            "gaussian" | "dense_gaussian" => Ok(EnsembleKind::DenseGaussian),
            other => Err(Error::InvalidParameter(format!("unknown ensemble kind '{other}'"))),
        }
    }
}

/// How a circulant source computes `Ax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculantPath {
    /// Whichever of the two paths below is cheaper for this `(d, M)`.
    Auto,
    /// `d/M` blocks of `M×M` Toeplitz products, `O(d log M)`.
    Blocked,
    /// One length-`d` circular convolution, `O(d log d)`.
    FullFft,
}

#[derive(Debug, Clone, PartialEq)]
enum Payload {
    Indices(Vec<usize>),
    Signs(Vec<i8>),
    /// Row-major `M×d`.
    Dense(Vec<f64>),
}

/// Precomputed spectra for the two circulant fast paths.
#[derive(Debug, Clone)]
struct CirculantCache {
    full_spectrum: Vec<Complex64>,
    block_len: usize,
    block_spectra: Vec<Vec<Complex64>>,
    prefer_blocked: bool,
}

impl CirculantCache {
    fn new(signs: &[i8], rows: usize) -> Result<Self> {
        let d = signs.len();
        let eps: Vec<Complex64> = signs.iter().map(|&s| Complex64::new(s as f64, 0.0)).collect();
        let full_spectrum = dft(&eps, Direction::Forward)?;
        let block_len = (2 * rows).next_power_of_two();
        let n_blocks = d.div_ceil(rows);
        let mut block_spectra = Vec::with_capacity(n_blocks);
        for c in 0..n_blocks {
            // T_c[j][l] = ε[(j - cM - l) mod d]
            let offset = c * rows;
            let mut v = vec![ZERO; block_len];
            for (j, slot) in v.iter_mut().take(rows).enumerate() {
                *slot = eps[(j + d * n_blocks - offset) % d];
            }
            for l in 1..rows {
                v[block_len - l] = eps[(d * (n_blocks + 1) - offset - l) % d];
            }
            transforms::fft_in_place(&mut v, Direction::Forward)?;
            block_spectra.push(v);
        }
        let log2 = |n: usize| n.trailing_zeros().max(1) as f64;
        let blocked_cost = (n_blocks + 1) as f64 * block_len as f64 * log2(block_len);
        let full_cost = 2.0 * d as f64 * log2(d);
        Ok(CirculantCache {
            full_spectrum,
            block_len,
            block_spectra,
            prefer_blocked: blocked_cost < full_cost,
        })
    }
}

/// A sampled structured matrix `A` with `M` rows over dimension `d`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RowSourceDoc", into = "RowSourceDoc")]
pub struct RowSource {
    kind: EnsembleKind,
    d: usize,
    rows: usize,
    seed: Option<u64>,
    payload: Payload,
    circulant: Option<CirculantCache>,
}

impl PartialEq for RowSource {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.d == other.d
            && self.rows == other.rows
            && self.seed == other.seed
            && self.payload == other.payload
    }
}

fn require_dimension(d: usize) -> Result<()> {
    if is_power_of_two(d) {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(d))
    }
}

fn require_rows(rows: usize) -> Result<()> {
    if rows == 0 {
        Err(Error::InvalidParameter("row count M must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Draws `M` row indices uniformly from `[0, d)` with replacement.
pub fn sample_bounded_orthogonal(d: usize, rows: usize, kind: EnsembleKind, rng: &mut Rng) -> Result<RowSource> {
    require_dimension(d)?;
    require_rows(rows)?;
    let indices = (0..rows).map(|_| rng.random_range(0..d as u64) as usize).collect();
    match kind {
        EnsembleKind::PartialFourier => RowSource::partial_fourier(d, indices),
        EnsembleKind::PartialHadamard => RowSource::partial_hadamard(d, indices),
        other => Err(Error::InvalidParameter(format!("{other} is not a bounded orthogonal ensemble"))),
    }
}

/// Draws `ε` uniformly from `{±1}^d`; the kept rows are `0..M`.
pub fn sample_partial_circulant(d: usize, rows: usize, rng: &mut Rng) -> Result<RowSource> {
    require_dimension(d)?;
    require_rows(rows)?;
    if rows > d {
        return Err(Error::CirculantTooManyRows { rows, d, padded: rows.next_power_of_two() });
    }
    let signs = (0..d).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    RowSource::partial_circulant(d, rows, signs)
}

/// I.i.d. standard normal entries, applied densely.
pub fn sample_dense_gaussian(d: usize, rows: usize, rng: &mut Rng) -> Result<RowSource> {
    require_dimension(d)?;
    require_rows(rows)?;
    let entries = (0..rows * d).map(|_| rng.sample(StandardNormal)).collect();
    RowSource::dense_gaussian(d, rows, entries)
}

impl RowSource {
    pub fn sample(kind: EnsembleKind, d: usize, rows: usize, rng: &mut Rng) -> Result<Self> {
        match kind {
            EnsembleKind::PartialFourier | EnsembleKind::PartialHadamard => {
                sample_bounded_orthogonal(d, rows, kind, rng)
            }
            EnsembleKind::PartialCirculant => sample_partial_circulant(d, rows, rng),
            EnsembleKind::DenseGaussian => sample_dense_gaussian(d, rows, rng),
        }
    }

    fn from_indices(kind: EnsembleKind, d: usize, indices: Vec<usize>) -> Result<Self> {
        require_dimension(d)?;
        require_rows(indices.len())?;
        if let Some(&bad) = indices.iter().find(|&&t| t >= d) {
            return Err(Error::InvalidParameter(format!("row index {bad} out of range for d = {d}")));
        }
        Ok(RowSource { kind, d, rows: indices.len(), seed: None, payload: Payload::Indices(indices), circulant: None })
    }

    pub fn partial_fourier(d: usize, indices: Vec<usize>) -> Result<Self> {
        Self::from_indices(EnsembleKind::PartialFourier, d, indices)
    }

    pub fn partial_hadamard(d: usize, indices: Vec<usize>) -> Result<Self> {
        Self::from_indices(EnsembleKind::PartialHadamard, d, indices)
    }

    pub fn partial_circulant(d: usize, rows: usize, signs: Vec<i8>) -> Result<Self> {
        require_dimension(d)?;
        require_rows(rows)?;
        check_len(d, signs.len())?;
        if rows > d {
            return Err(Error::CirculantTooManyRows { rows, d, padded: rows.next_power_of_two() });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("circulant signs must be +1 or -1".into()));
        }
        let cache = CirculantCache::new(&signs, rows)?;
        Ok(RowSource {
            kind: EnsembleKind::PartialCirculant,
            d,
            rows,
            seed: None,
            payload: Payload::Signs(signs),
            circulant: Some(cache),
        })
    }

    pub fn dense_gaussian(d: usize, rows: usize, entries: Vec<f64>) -> Result<Self> {
        require_dimension(d)?;
        require_rows(rows)?;
        check_len(rows * d, entries.len())?;
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(RowSource { kind: EnsembleKind::DenseGaussian, d, rows, seed: None, payload: Payload::Dense(entries), circulant: None })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `M`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Sampled row indices for Fourier/Hadamard sources.
    pub fn indices(&self) -> Option<&[usize]> {
        match &self.payload {
            Payload::Indices(v) => Some(v),
            _ => None,
        }
    }

    /// `ε` for circulant sources.
    pub fn signs(&self) -> Option<&[i8]> {
        match &self.payload {
            Payload::Signs(v) => Some(v),
            _ => None,
        }
    }

    pub fn dense_entries(&self) -> Option<&[f64]> {
        match &self.payload {
            Payload::Dense(v) => Some(v),
            _ => None,
        }
    }

    /// `Ax`, using the automatic circulant path.
    pub fn apply_rows(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.apply_rows_with(x, CirculantPath::Auto)
    }

    pub fn apply_rows_with(&self, x: &[Complex64], path: CirculantPath) -> Result<Vec<Complex64>> {
        check_len(self.d, x.len())?;
        require_finite(x)?;
        match &self.payload {
            Payload::Indices(idx) => {
                let mut buf = x.to_vec();
                match self.kind {
                    EnsembleKind::PartialFourier => fft_in_place(&mut buf, Direction::Forward)?,
                    _ => fwht_in_place(&mut buf)?,
                }
                Ok(idx.iter().map(|&t| buf[t]).collect())
            }
            Payload::Signs(_) => {
                let cache = self.circulant.as_ref().expect("circulant cache is built on construction");
                if self.use_blocked(path) {
                    Ok(self.circulant_blocked_forward(cache, x))
                } else {
                    let mut y = convolve_with_spectrum(&cache.full_spectrum, x)?;
                    y.truncate(self.rows);
                    Ok(y)
                }
            }
            Payload::Dense(a) => Ok(a
                .chunks_exact(self.d)
                .map(|row| row.iter().zip(x).map(|(r, v)| v * *r).sum())
                .collect()),
        }
    }

    /// `A* y`.
    pub fn apply_rows_adjoint(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        self.apply_rows_adjoint_with(y, CirculantPath::Auto)
    }

    pub fn apply_rows_adjoint_with(&self, y: &[Complex64], path: CirculantPath) -> Result<Vec<Complex64>> {
        check_len(self.rows, y.len())?;
        require_finite(y)?;
        match &self.payload {
            Payload::Indices(idx) => {
                let mut buf = vec![ZERO; self.d];
                for (&t, v) in idx.iter().zip(y) {
                    buf[t] += v;
                }
                match self.kind {
                    EnsembleKind::PartialFourier => transforms::transform_unscaled(&mut buf, true)?,
                    _ => fwht_in_place(&mut buf)?,
                }
                Ok(buf)
            }
            Payload::Signs(_) => {
                let cache = self.circulant.as_ref().expect("circulant cache is built on construction");
                if self.use_blocked(path) {
                    Ok(self.circulant_blocked_adjoint(cache, y))
                } else {
                    // correlation with the real vector ε
                    let mut buf = vec![ZERO; self.d];
                    buf[..self.rows].copy_from_slice(y);
                    fft_in_place(&mut buf, Direction::Forward)?;
                    for (b, s) in buf.iter_mut().zip(&cache.full_spectrum) {
                        *b *= s.conj();
                    }
                    fft_in_place(&mut buf, Direction::Inverse)?;
                    Ok(buf)
                }
            }
            Payload::Dense(a) => {
                let mut out = vec![ZERO; self.d];
                for (row, v) in a.chunks_exact(self.d).zip(y) {
                    for (o, r) in out.iter_mut().zip(row) {
                        *o += v * *r;
                    }
                }
                Ok(out)
            }
        }
    }

    fn use_blocked(&self, path: CirculantPath) -> bool {
        match path {
            CirculantPath::Blocked => true,
            CirculantPath::FullFft => false,
            CirculantPath::Auto => self.circulant.as_ref().is_some_and(|c| c.prefer_blocked),
        }
    }

    fn circulant_blocked_forward(&self, cache: &CirculantCache, x: &[Complex64]) -> Vec<Complex64> {
        let (m, len) = (self.rows, cache.block_len);
        let mut acc = vec![ZERO; len];
        let mut buf = vec![ZERO; len];
        for (block, spectrum) in x.chunks(m).zip(&cache.block_spectra) {
            buf.fill(ZERO);
            buf[..block.len()].copy_from_slice(block);
            fft_in_place(&mut buf, Direction::Forward).expect("block length is a power of two");
            for ((a, b), s) in acc.iter_mut().zip(&buf).zip(spectrum) {
                *a += b * s;
            }
        }
        fft_in_place(&mut acc, Direction::Inverse).expect("block length is a power of two");
        acc.truncate(m);
        acc
    }

    fn circulant_blocked_adjoint(&self, cache: &CirculantCache, y: &[Complex64]) -> Vec<Complex64> {
        let (m, len) = (self.rows, cache.block_len);
        let mut yf = vec![ZERO; len];
        yf[..m].copy_from_slice(y);
        fft_in_place(&mut yf, Direction::Forward).expect("block length is a power of two");
        let mut out = Vec::with_capacity(self.d);
        let mut buf = vec![ZERO; len];
        for spectrum in &cache.block_spectra {
            for ((b, v), s) in buf.iter_mut().zip(&yf).zip(spectrum) {
                *b = v * s.conj();
            }
            fft_in_place(&mut buf, Direction::Inverse).expect("block length is a power of two");
            let take = m.min(self.d - out.len());
            out.extend_from_slice(&buf[..take]);
        }
        out
    }

    /// Row `i` of `A` as an explicit vector.
    pub fn row(&self, i: usize) -> Vec<Complex64> {
        assert!(i < self.rows, "row {i} out of range");
        let d = self.d;
        match &self.payload {
            Payload::Indices(idx) => {
                let t = idx[i];
                match self.kind {
                    EnsembleKind::PartialFourier => (0..d)
                        .map(|j| {
                            let phase = ((t * j) % d) as f64 / d as f64;
                            let (s, c) = (-2.0 * std::f64::consts::PI * phase).sin_cos();
                            Complex64::new(c, s)
                        })
                        .collect(),
                    _ => (0..d)
                        .map(|j| {
                            let sign = if (t & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                            Complex64::new(sign, 0.0)
                        })
                        .collect(),
                }
            }
            Payload::Signs(eps) => (0..d).map(|j| Complex64::new(eps[(i + d - j) % d] as f64, 0.0)).collect(),
            Payload::Dense(a) => a[i * d..(i + 1) * d].iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn densify(&self) -> Result<CMatrix> {
        self.densify_with_cap(DEFAULT_DENSIFY_CAP)
    }

    pub fn densify_with_cap(&self, cap: u128) -> Result<CMatrix> {
        let entries = self.rows as u128 * self.d as u128;
        if entries > cap {
            return Err(Error::DensifyCap { entries, cap });
        }
        let rows: Vec<Vec<Complex64>> = (0..self.rows).map(|i| self.row(i)).collect();
        CMatrix::from_rows(&rows)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PayloadDoc {
    Indices(Vec<usize>),
    Signs(Vec<i8>),
    Entries(Vec<Vec<f64>>),
}

#[derive(Serialize, Deserialize)]
struct RowSourceDoc {
    kind: EnsembleKind,
    d: usize,
    #[serde(rename = "M")]
    rows: usize,
    seed: Option<u64>,
    payload: PayloadDoc,
}

impl From<RowSource> for RowSourceDoc {
    fn from(src: RowSource) -> Self {
        let payload = match src.payload {
            Payload::Indices(v) => PayloadDoc::Indices(v),
            Payload::Signs(v) => PayloadDoc::Signs(v),
            Payload::Dense(v) => PayloadDoc::Entries(v.chunks_exact(src.d).map(<[f64]>::to_vec).collect()),
        };
        RowSourceDoc { kind: src.kind, d: src.d, rows: src.rows, seed: src.seed, payload }
    }
}

impl TryFrom<RowSourceDoc> for RowSource {
    type Error = Error;

    fn try_from(doc: RowSourceDoc) -> Result<Self> {
        let src = match (doc.kind, doc.payload) {
            (EnsembleKind::PartialFourier, PayloadDoc::Indices(v)) => RowSource::partial_fourier(doc.d, v)?,
            (EnsembleKind::PartialHadamard, PayloadDoc::Indices(v)) => RowSource::partial_hadamard(doc.d, v)?,
            (EnsembleKind::PartialCirculant, PayloadDoc::Signs(v)) => RowSource::partial_circulant(doc.d, doc.rows, v)?,
            (EnsembleKind::DenseGaussian, PayloadDoc::Entries(rows)) => {
                RowSource::dense_gaussian(doc.d, rows.len(), rows.concat())?
            }
            (kind, _) => return Err(Error::Parse(format!("payload does not match kind {kind}"))),
        };
        check_len(doc.rows, src.rows)?;
        Ok(match doc.seed {
            Some(s) => src.with_seed(s),
            None => src,
        })
    }
}

impl fmt::Display for RowSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} source, M = {}, d = {}", self.kind, self.rows, self.d)
    }
}
