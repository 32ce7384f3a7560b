//! Planning heuristic for `(m, B)`.
//!
//! The row and bucket bounds are asymptotic; here every hidden constant is set
//! to one and every logarithm is natural. Bounded orthogonal sources use
//! `B = ⌈ln^{6.5} d⌉`; circulant sources use `B = ⌈ln²m ln²k ln²d⌉`, which
//! depends on `m` and is iterated to a fixed point. In both cases
//! `m = ⌈k ln d ln²(Bk) / ε²⌉`, then capped at `d`. Circulant plans whose `mB`
//! exceeds `d` are zero-padded to the next power of two.

use serde::{Deserialize, Serialize};

use crate::ensembles::EnsembleKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPlan {
    pub kind: EnsembleKind,
    pub d: usize,
    pub k: usize,
    pub epsilon: f64,
    /// Recommended rows, `min(m_formula, d)`.
    pub m: u64,
    /// `⌈k ln d ln²(Bk) / ε²⌉` before capping.
    pub m_formula: u64,
    #[serde(rename = "B")]
    pub bucket_size: u64,
    /// Power-of-two dimension the signal should be zero-padded to.
    pub d_effective: u64,
    pub warnings: Vec<String>,
    pub library_version: String,
}

fn rows_formula(d: f64, k: f64, bucket: f64, epsilon: f64) -> f64 {
    let l = (bucket * k).ln();
    (k * d.ln() * l * l / (epsilon * epsilon)).ceil()
}

fn to_u64(v: f64, what: &str) -> Result<u64> {
    if v.is_finite() && v >= 0.0 && v < u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(Error::InvalidParameter(format!("{what} = {v} does not fit a 64-bit count")))
    }
}

pub fn recommend_parameters(d: usize, k: usize, epsilon: f64, kind: EnsembleKind) -> Result<ParameterPlan> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if d == 0 || k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= d, got k = {k}, d = {d}")));
    }
    let mut warnings = Vec::new();
    let (df, kf) = (d as f64, k as f64);
    let ln_d = df.ln();

    let (bucket, m_formula) = match kind {
        EnsembleKind::PartialCirculant => {
            let ln_k = kf.ln();
            let mut bucket = 1.0f64;
            let mut m = rows_formula(df, kf, bucket, epsilon);
            for _ in 0..100 {
                let ln_m = m.ln();
                let next_bucket = (ln_m * ln_m * ln_k * ln_k * ln_d * ln_d).ceil().max(1.0);
                let next_m = rows_formula(df, kf, next_bucket, epsilon);
                let settled = next_bucket == bucket && next_m == m;
                bucket = next_bucket;
                m = next_m;
                if settled {
                    break;
                }
            }
            if kf < m.ln().powi(2) {
                warnings.push(format!("k = {k} is below the regime floor ln²(m) = {:.2}", m.ln().powi(2)));
            }
            (bucket, m)
        }
        _ => {
            if kind == EnsembleKind::DenseGaussian {
                warnings.push("dense_gaussian has no bucketed bound; using the bounded orthogonal plan".into());
            }
            let bucket = ln_d.powf(6.5).ceil().max(1.0);
            let m = rows_formula(df, kf, bucket, epsilon);
            if kf < m.ln().powf(2.5) {
                warnings.push(format!("k = {k} is below the regime floor ln^2.5(m) = {:.2}", m.ln().powf(2.5)));
            }
            (bucket, m)
        }
    };

    let bucket_size = to_u64(bucket, "B")?;
    let m_formula = to_u64(m_formula.max(1.0), "m")?;
    let mut m = m_formula;
    if m > d as u64 {
        warnings.push(format!("m = {m_formula} exceeds d = {d}; capped at d"));
        m = d as u64;
    }

    let mut d_effective = (d as u64).next_power_of_two();
    if d_effective != d as u64 {
        warnings.push(format!("d = {d} is not a power of two; padded to {d_effective}"));
    }
    if kind == EnsembleKind::PartialCirculant {
        let rows = m
            .checked_mul(bucket_size)
            .ok_or_else(|| Error::InvalidParameter("m*B overflows a 64-bit count".into()))?;
        if rows > d_effective {
            d_effective = rows
                .checked_next_power_of_two()
                .ok_or_else(|| Error::InvalidParameter("padded dimension overflows".into()))?;
            warnings.push(format!("m*B = {rows} exceeds d; zero-pad the signal to d' = {d_effective}"));
        }
    }

    Ok(ParameterPlan {
        kind,
        d,
        k,
        epsilon,
        m,
        m_formula,
        bucket_size,
        d_effective,
        warnings,
        library_version: crate::VERSION.to_string(),
    })
}
