//! The hashed operator `Φ/√(mB)`.
//!
//! `mB` rows of a structured source are split into `m` consecutive buckets of
//! `B` rows; bucket `b` becomes the single row `Σ_i σ_{b,i} a_{h(b,i)}`. With
//! `Φ = HA`, a product costs one fast `Ax` plus `O(mB)` for `H`.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::ensembles::{CirculantPath, EnsembleKind, RowSource, DEFAULT_DENSIFY_CAP};
use crate::error::{check_len, Error, Result};
use crate::linalg::CMatrix;
use crate::seed::{self, Rng};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The bucket hash `h(b, i) = B(b-1) + i` with one-based `b ∈ [1, m]`,
/// `i ∈ [1, B]`, returning a one-based row index in `[1, mB]`.
pub fn bucket_index(b: usize, i: usize, m: usize, bucket_size: usize) -> Result<usize> {
    if b == 0 || b > m {
        return Err(Error::InvalidParameter(format!("bucket {b} outside [1, {m}]")));
    }
    if i == 0 || i > bucket_size {
        return Err(Error::InvalidParameter(format!("slot {i} outside [1, {bucket_size}]")));
    }
    Ok(bucket_size * (b - 1) + i)
}

/// Rademacher signs `σ_{b,i}`, stored row-major as `m × B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    m: usize,
    bucket_size: usize,
    signs: Vec<i8>,
}

impl SignTable {
    pub fn new(m: usize, bucket_size: usize, signs: Vec<i8>) -> Result<Self> {
        if m == 0 || bucket_size == 0 {
            return Err(Error::InvalidParameter("m and B must be at least 1".into()));
        }
        check_len(m * bucket_size, signs.len())?;
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("signs must be +1 or -1".into()));
        }
        Ok(SignTable { m, bucket_size, signs })
    }

    pub fn sample(m: usize, bucket_size: usize, rng: &mut Rng) -> Result<Self> {
        let signs = (0..m * bucket_size).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        Self::new(m, bucket_size, signs)
    }

    pub fn all_positive(m: usize, bucket_size: usize) -> Result<Self> {
        Self::new(m, bucket_size, vec![1; m * bucket_size])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bucket_size(&self) -> usize {
        self.bucket_size
    }

    /// Zero-based `σ_{b,i}`.
    pub fn get(&self, b: usize, i: usize) -> i8 {
        self.signs[b * self.bucket_size + i]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.signs
    }

    pub fn negated(&self) -> Self {
        SignTable { signs: self.signs.iter().map(|s| -s).collect(), ..self.clone() }
    }

    /// `H y` for a length-`mB` vector, without normalization.
    pub fn combine(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.m * self.bucket_size, y.len())?;
        Ok(y.chunks_exact(self.bucket_size)
            .zip(self.signs.chunks_exact(self.bucket_size))
            .map(|(ys, ss)| ys.iter().zip(ss).map(|(v, &s)| if s > 0 { *v } else { -*v }).sum())
            .collect())
    }

    /// `H* z`, without normalization.
    pub fn spread(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.m, z.len())?;
        let mut w = Vec::with_capacity(self.m * self.bucket_size);
        for (zb, ss) in z.iter().zip(self.signs.chunks_exact(self.bucket_size)) {
            w.extend(ss.iter().map(|&s| if s > 0 { *zb } else { -*zb }));
        }
        Ok(w)
    }
}

/// Everything needed to rebuild an operator bit-identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchSpec {
    pub kind: EnsembleKind,
    pub d: usize,
    pub m: usize,
    #[serde(rename = "B")]
    pub bucket_size: usize,
    pub seed: u64,
}

impl SketchSpec {
    pub fn build(&self) -> Result<SketchOperator> {
        build_sketch(self.d, self.m, self.bucket_size, self.kind, self.seed)
    }
}

/// Samples the source from stream `(seed, 0, "rows")` and the sign table from
/// `(seed, 0, "signs")`.
pub fn build_sketch(d: usize, m: usize, bucket_size: usize, kind: EnsembleKind, seed: u64) -> Result<SketchOperator> {
    if m == 0 || bucket_size == 0 {
        return Err(Error::InvalidParameter("m and B must be at least 1".into()));
    }
    let rows = m
        .checked_mul(bucket_size)
        .ok_or_else(|| Error::InvalidParameter("m*B overflows".into()))?;
    let source = RowSource::sample(kind, d, rows, &mut seed::stream(seed, 0, "rows"))?.with_seed(seed);
    let signs = SignTable::sample(m, bucket_size, &mut seed::stream(seed, 0, "signs"))?;
    let mut op = SketchOperator::from_parts(source, signs)?;
    op.seed = Some(seed);
    Ok(op)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SketchOperator {
    source: RowSource,
    signs: SignTable,
    scale: f64,
    seed: Option<u64>,
}

impl SketchOperator {
    pub fn from_parts(source: RowSource, signs: SignTable) -> Result<Self> {
        check_len(signs.m() * signs.bucket_size(), source.rows())?;
        let scale = 1.0 / ((signs.m() * signs.bucket_size()) as f64).sqrt();
        Ok(SketchOperator { source, signs, scale, seed: None })
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn m(&self) -> usize {
        self.signs.m()
    }

    pub fn bucket_size(&self) -> usize {
        self.signs.bucket_size()
    }

    pub fn kind(&self) -> EnsembleKind {
        self.source.kind()
    }

    /// `1/√(mB)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn source(&self) -> &RowSource {
        &self.source
    }

    pub fn sign_table(&self) -> &SignTable {
        &self.signs
    }

    /// `None` for operators assembled from explicit parts.
    pub fn spec(&self) -> Option<SketchSpec> {
        self.seed.map(|seed| SketchSpec {
            kind: self.kind(),
            d: self.dim(),
            m: self.m(),
            bucket_size: self.bucket_size(),
            seed,
        })
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.apply_with(x, CirculantPath::Auto)
    }

    pub fn apply_with(&self, x: &[Complex64], path: CirculantPath) -> Result<Vec<Complex64>> {
        let y = self.source.apply_rows_with(x, path)?;
        let mut out = self.signs.combine(&y)?;
        out.iter_mut().for_each(|v| *v *= self.scale);
        Ok(out)
    }

    pub fn apply_adjoint(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.apply_adjoint_with(z, CirculantPath::Auto)
    }

    pub fn apply_adjoint_with(&self, z: &[Complex64], path: CirculantPath) -> Result<Vec<Complex64>> {
        let mut w = self.signs.spread(z)?;
        w.iter_mut().for_each(|v| *v *= self.scale);
        self.source.apply_rows_adjoint_with(&w, path)
    }

    /// Explicit `m × d` matrix built row by row from the source rows.
    pub fn densify(&self) -> Result<CMatrix> {
        self.densify_with_cap(DEFAULT_DENSIFY_CAP)
    }

    pub fn densify_with_cap(&self, cap: u128) -> Result<CMatrix> {
        let (m, d, bsz) = (self.m(), self.dim(), self.bucket_size());
        let entries = m as u128 * d as u128;
        if entries > cap {
            return Err(Error::DensifyCap { entries, cap });
        }
        let mut out = CMatrix::zeros(m, d);
        for b in 0..m {
            for i in 0..bsz {
                let s = self.signs.get(b, i) as f64 * self.scale;
                for (j, a) in self.source.row(b * bsz + i).into_iter().enumerate() {
                    out[(b, j)] += a * s;
                }
            }
        }
        Ok(out)
    }

    /// Explicit matrix whose column `j` is `apply(e_j)`.
    pub fn matrix_by_columns(&self) -> Result<CMatrix> {
        let d = self.dim();
        let entries = self.m() as u128 * d as u128;
        if entries > DEFAULT_DENSIFY_CAP {
            return Err(Error::DensifyCap { entries, cap: DEFAULT_DENSIFY_CAP });
        }
        let columns: Vec<Vec<Complex64>> = (0..d).map(|j| self.column(j)).collect::<Result<_>>()?;
        CMatrix::from_columns(self.m(), &columns)
    }

    /// `apply(e_j)`.
    pub fn column(&self, j: usize) -> Result<Vec<Complex64>> {
        let mut e = vec![ZERO; self.dim()];
        *e.get_mut(j).ok_or(Error::DimensionMismatch { expected: self.dim(), actual: j + 1 })? =
            Complex64::new(1.0, 0.0);
        self.apply(&e)
    }

    /// Little-endian audit dump of payload and signs:
    /// magic `FSKD`, format version `u32 = 1`, kind tag `u8`, then `d`, `m`,
    /// `B` and seed (`u64::MAX` when absent) as `u64`, the payload, and the
    /// sign table packed eight signs per byte (bit set for `+1`, LSB first).
    /// Payload is `M` `u64` indices, `d` `i8` signs, or `M·d` `f64` entries.
    pub fn write_audit_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"FSKD")?;
        w.write_all(&1u32.to_le_bytes())?;
        let tag: u8 = match self.kind() {
            EnsembleKind::PartialFourier => 0,
            EnsembleKind::PartialHadamard => 1,
            EnsembleKind::PartialCirculant => 2,
            EnsembleKind::DenseGaussian => 3,
        };
        w.write_all(&[tag])?;
        for v in [self.dim(), self.m(), self.bucket_size()] {
            w.write_all(&(v as u64).to_le_bytes())?;
        }
        w.write_all(&self.seed.unwrap_or(u64::MAX).to_le_bytes())?;
        if let Some(idx) = self.source.indices() {
            for &t in idx {
                w.write_all(&(t as u64).to_le_bytes())?;
            }
        } else if let Some(eps) = self.source.signs() {
            let bytes: Vec<u8> = eps.iter().map(|&s| s as u8).collect();
            w.write_all(&bytes)?;
        } else if let Some(entries) = self.source.dense_entries() {
            for v in entries {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        for chunk in self.signs.as_slice().chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &s)| if s > 0 { acc | (1 << k) } else { acc });
            w.write_all(&[byte])?;
        }
        Ok(())
    }
}
