//! Johnson-Lindenstrauss embeddings from the RIP operator: multiply the
//! coordinates by one shared random sign vector `ξ`, then apply `Φ`. The map
//! `x ↦ Φ diag(ξ) x` is linear, so pairwise distances are those of the
//! difference vectors.

use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::norm2;
use crate::seed;
use crate::sketch::SketchOperator;

/// `N` points of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    complex: bool,
    points: Vec<Vec<Complex64>>,
}

impl PointSet {
    pub fn new(dim: usize, complex: bool, points: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("point dimension must be positive".into()));
        }
        for p in &points {
            check_len(dim, p.len())?;
        }
        Ok(PointSet { dim, complex, points })
    }

    pub fn from_real(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let points = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::new(dim, false, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<Complex64>> {
        self.points
    }
}

/// Pairwise distance distortion of an embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub max_expansion: f64,
    pub min_contraction: f64,
    pub epsilon_hat: f64,
    pub pairs_evaluated: u64,
    /// Pairs with `x_i == x_j`, left out of the ratios.
    pub zero_distance_pairs: u64,
}

/// The sign diagonal drawn by [`jl_embed`] for a given seed.
pub fn jl_signs(d: usize, seed: u64) -> Vec<i8> {
    let mut rng = seed::stream(seed, 0, "jl-signs");
    (0..d).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

pub fn jl_embed(op: &SketchOperator, pts: &PointSet, seed: u64) -> Result<PointSet> {
    check_len(op.dim(), pts.dim())?;
    let xi = jl_signs(op.dim(), seed);
    let embedded = pts
        .points()
        .par_iter()
        .map(|p| {
            let signed: Vec<Complex64> = p.iter().zip(&xi).map(|(v, &s)| if s > 0 { *v } else { -*v }).collect();
            op.apply(&signed)
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(op.m(), true, embedded)
}

/// Exact all-pairs ratios `‖y_i - y_j‖ / ‖x_i - x_j‖`.
pub fn distortion_report(original: &PointSet, embedded: &PointSet) -> Result<DistortionReport> {
    check_len(original.len(), embedded.len())?;
    let n = original.len();
    if n < 2 {
        return Err(Error::InvalidParameter("distortion needs at least two points".into()));
    }
    let diff = |a: &[Complex64], b: &[Complex64]| -> f64 {
        a.iter().zip(b).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt()
    };
    let (lo, hi, evaluated, zeros) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = (f64::INFINITY, f64::NEG_INFINITY, 0u64, 0u64);
            for j in i + 1..n {
                let before = diff(&original.points[i], &original.points[j]);
                if before == 0.0 {
                    acc.3 += 1;
                    continue;
                }
                let ratio = diff(&embedded.points[i], &embedded.points[j]) / before;
                acc.0 = acc.0.min(ratio);
                acc.1 = acc.1.max(ratio);
                acc.2 += 1;
            }
            acc
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY, 0, 0),
            |a, b| (a.0.min(b.0), a.1.max(b.1), a.2 + b.2, a.3 + b.3),
        );
    if evaluated == 0 {
        return Ok(DistortionReport {
            max_expansion: 1.0,
            min_contraction: 1.0,
            epsilon_hat: 0.0,
            pairs_evaluated: 0,
            zero_distance_pairs: zeros,
        });
    }
    Ok(DistortionReport {
        max_expansion: hi,
        min_contraction: lo,
        epsilon_hat: (hi - 1.0).max(1.0 - lo).max(0.0),
        pairs_evaluated: evaluated,
        zero_distance_pairs: zeros,
    })
}

/// `‖x‖₂` of every point, handy for sanity checks on embeddings.
pub fn norms(pts: &PointSet) -> Vec<f64> {
    pts.points().iter().map(|p| norm2(p)).collect()
}
