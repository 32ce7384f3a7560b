//! Per-bucket block norms `sup_{x ∈ T_s} ‖A_b x‖`, where `A_b` holds the `B`
//! unnormalized source rows hashed into bucket `b`. Useful for comparing the
//! sampled source against the `Q₁√B + Q₂√s` shape of the side condition.

use serde::{Deserialize, Serialize};

use crate::analysis::rip::{binomial, next_combination, DEFAULT_SUPPORT_CAP};
use crate::error::{Error, Result};
use crate::linalg::{gram_of_columns, hermitian_extremes, CMatrix};
use crate::sketch::SketchOperator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketNormProfile {
    pub s: usize,
    pub per_bucket: Vec<f64>,
    pub max: f64,
}

pub fn bucket_norm_profile(op: &SketchOperator, s: usize) -> Result<BucketNormProfile> {
    bucket_norm_profile_with_cap(op, s, DEFAULT_SUPPORT_CAP)
}

pub fn bucket_norm_profile_with_cap(op: &SketchOperator, s: usize, cap: u128) -> Result<BucketNormProfile> {
    let (d, m, bsz) = (op.dim(), op.m(), op.bucket_size());
    if s > d {
        return Err(Error::InvalidParameter(format!("sparsity s = {s} exceeds d = {d}")));
    }
    if s == 0 {
        return Ok(BucketNormProfile { s, per_bucket: vec![0.0; m], max: 0.0 });
    }
    let supports = binomial(d, s);
    if supports > cap {
        return Err(Error::EnumerationCap { supports, cap });
    }
    let mut per_bucket = Vec::with_capacity(m);
    for b in 0..m {
        let rows: Vec<_> = (0..bsz).map(|i| op.source().row(b * bsz + i)).collect();
        let block = CMatrix::from_rows(&rows)?;
        let g = gram_of_columns(&block.columns());
        let mut support: Vec<usize> = (0..s).collect();
        let mut top = 0.0f64;
        loop {
            top = top.max(hermitian_extremes(&g.principal(&support)).1);
            if !next_combination(&mut support, d) {
                break;
            }
        }
        per_bucket.push(top.max(0.0).sqrt());
    }
    let max = per_bucket.iter().copied().fold(0.0, f64::max);
    Ok(BucketNormProfile { s, per_bucket, max })
}
