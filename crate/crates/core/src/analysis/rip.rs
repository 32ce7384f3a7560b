//! Restricted-isometry constants: exhaustive over all `k`-supports for small
//! problems, and a certified lower bound from random supports otherwise.
//!
//! Both routes reduce a support `S` to the extreme eigenvalues of the principal
//! Gram block `G_S = Φ_S* Φ_S` and report `max(λ_max - 1, 1 - λ_min)`.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use web_time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gram_of_columns, hermitian_extremes, CMatrix};
use crate::seed::Rng;
use crate::sketch::SketchOperator;

/// Default limit on `C(d, k)` for exhaustive enumeration.
pub const DEFAULT_SUPPORT_CAP: u128 = 1_000_000;

// A pruned support's deviation bound must sit this far below the running
// maximum, so rounding in the bound can never hide a support that would have
// moved the maximum.
const PRUNE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RipMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipReport {
    pub k: usize,
    pub method: RipMethod,
    /// Exact constant, or a lower bound for `MonteCarlo`.
    pub epsilon: f64,
    /// A support attaining `epsilon`, with the extreme eigenvalues of its
    /// Gram block.
    pub worst_support: Vec<usize>,
    pub worst_lambda_min: f64,
    pub worst_lambda_max: f64,
    pub supports_evaluated: u64,
    pub seed: Option<u64>,
    pub wall_time: f64,
    pub library_version: String,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn deviation(lo: f64, hi: f64) -> f64 {
    (hi - 1.0).max(1.0 - lo).max(0.0)
}

/// Advances `comb` to the next increasing combination of values in `[0, n)`.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let r = comb.len();
    for pos in (0..r).rev() {
        if comb[pos] < n - r + pos {
            comb[pos] += 1;
            for q in pos + 1..r {
                comb[q] = comb[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone)]
struct Extremes {
    eps: f64,
    lo: f64,
    hi: f64,
    support: Vec<usize>,
}

impl Extremes {
    fn empty() -> Self {
        Extremes { eps: -1.0, lo: f64::NAN, hi: f64::NAN, support: vec![] }
    }

    // ties keep the lexicographically first support
    fn merge(self, other: Extremes) -> Extremes {
        if other.eps > self.eps || (other.eps == self.eps && other.support < self.support) {
            other
        } else {
            self
        }
    }

    fn offer(&mut self, lo: f64, hi: f64, support: &[usize]) {
        let eps = deviation(lo, hi);
        if eps > self.eps {
            *self = Extremes { eps, lo, hi, support: support.to_vec() };
        }
    }
}

pub fn exact_rip_constant(mat: &CMatrix, k: usize) -> Result<RipReport> {
    exact_rip_constant_with_cap(mat, k, DEFAULT_SUPPORT_CAP)
}

/// Exhaustive constant over all `C(d, k)` supports.
///
/// Supports are grouped by their first `k-1` indices. For a parent block with
/// extreme eigenvalues `[lo, hi]`, appending column `l` with coupling
/// `β = ‖G_{P,l}‖` gives eigenvalues inside the spectrum of the 2x2 matrix
/// `[[hi, β], [β, G_ll]]` (resp. `lo`), so a child is evaluated only when that
/// enclosure reaches past the running maximum. The same enclosure, applied
/// one level up, avoids most parent eigenvalue computations.
pub fn exact_rip_constant_with_cap(mat: &CMatrix, k: usize, cap: u128) -> Result<RipReport> {
    let start = Instant::now();
    let d = mat.cols();
    if k == 0 || k > d.min(mat.rows()) {
        return Err(Error::InvalidParameter(format!(
            "sparsity k = {k} must lie in [1, min(rows, cols)] = [1, {}]",
            d.min(mat.rows())
        )));
    }
    let supports = binomial(d, k);
    if supports > cap {
        return Err(Error::EnumerationCap { supports, cap });
    }
    let g = mat.gram();
    let singletons = (0..d).fold(Extremes::empty(), |mut acc, i| {
        let v = g[(i, i)].re;
        acc.offer(v, v, &[i]);
        acc
    });
    let best = if k == 1 {
        singletons
    } else {
        // Every k-support contains a singleton, so the singleton maximum is a
        // floor for the answer and can drive pruning from the start.
        let floor = singletons.eps;
        let coupling = Coupling::new(&g);
        (0..=d - k)
            .into_par_iter()
            .map(|first| enumerate_from(&g, &coupling, k, first, floor))
            .reduce_with(Extremes::merge)
            .expect("at least one starting index")
    };
    Ok(RipReport {
        k,
        method: RipMethod::Exact,
        epsilon: best.eps,
        worst_support: best.support,
        worst_lambda_min: best.lo,
        worst_lambda_max: best.hi,
        supports_evaluated: supports as u64,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
        library_version: crate::VERSION.to_string(),
    })
}

// Squared moduli of the Gram entries (row-major) and the real diagonal, laid
// out for the child loop.
struct Coupling {
    abs2: Vec<f64>,
    diag: Vec<f64>,
}

impl Coupling {
    fn new(g: &CMatrix) -> Self {
        let d = g.rows();
        let abs2 = (0..d * d).map(|t| g[(t / d, t % d)].norm_sqr()).collect();
        let diag = (0..d).map(|i| g[(i, i)].re).collect();
        Coupling { abs2, diag }
    }

    fn row(&self, a: usize) -> &[f64] {
        let d = self.diag.len();
        &self.abs2[a * d..(a + 1) * d]
    }
}

// Spectrum enclosure for a block extended by one index: if the block's
// eigenvalues lie in [lo, hi], the new diagonal entry is `c` and the squared
// coupling norm is `b2`, the extended block's eigenvalues lie in the returned
// interval (eigenvalues of [[hi, β], [β, c]] and [[lo, β], [β, c]]).
fn extend_enclosure(lo: f64, hi: f64, c: f64, b2: f64) -> (f64, f64) {
    let up = 0.5 * (hi + c) + (0.25 * (hi - c) * (hi - c) + b2).sqrt();
    let down = 0.5 * (lo + c) - (0.25 * (lo - c) * (lo - c) + b2).sqrt();
    (down, up)
}

// All k-supports whose smallest index is `first`.
//
// Each (k-1)-parent is first bounded through its own (k-2)-prefix, whose
// extremes are cached while the prefix is unchanged; the parent's exact
// extremes are computed only when some child escapes that looser bound.
fn enumerate_from(g: &CMatrix, coupling: &Coupling, k: usize, first: usize, floor: f64) -> Extremes {
    let d = g.rows();
    let mut best = Extremes::empty();
    let r = k - 1;
    // parent = [first, rest...] with rest increasing in (first, d - 1)
    let mut rest: Vec<usize> = (first + 1..first + r).collect();
    let mut parent = vec![0usize; r];
    let mut support = vec![0usize; k];
    let mut beta2 = vec![0.0f64; d];
    let mut prefix: Option<(Vec<usize>, f64, f64)> = None;
    let threshold = |best: &Extremes| best.eps.max(floor) - PRUNE_MARGIN;
    loop {
        parent[0] = first;
        parent[1..].copy_from_slice(&rest);
        let last = parent[r - 1];
        if last + 1 < d {
            for acc in &mut beta2[last + 1..] {
                *acc = 0.0;
            }
            for &a in &parent {
                for (acc, w) in beta2[last + 1..].iter_mut().zip(&coupling.row(a)[last + 1..]) {
                    *acc += w;
                }
            }
            let children_pruned = |lo: f64, hi: f64, t: f64| {
                (last + 1..d).all(|l| {
                    let (down, up) = extend_enclosure(lo, hi, coupling.diag[l], beta2[l]);
                    deviation(down, up) < t
                })
            };

            let mut skip = false;
            if r >= 2 {
                let head = &parent[..r - 1];
                if prefix.as_ref().is_none_or(|(p, _, _)| p.as_slice() != head) {
                    let (lo, hi) = hermitian_extremes(&g.principal(head));
                    prefix = Some((head.to_vec(), lo, hi));
                }
                let (_, qlo, qhi) = prefix.as_ref().expect("prefix set above");
                let b2: f64 = head.iter().map(|&a| coupling.row(a)[last]).sum();
                let (elo, ehi) = extend_enclosure(*qlo, *qhi, coupling.diag[last], b2);
                skip = children_pruned(elo, ehi, threshold(&best));
            }
            if !skip {
                let (plo, phi) = hermitian_extremes(&g.principal(&parent));
                for l in last + 1..d {
                    let (down, up) = extend_enclosure(plo, phi, coupling.diag[l], beta2[l]);
                    if deviation(down, up) < threshold(&best) {
                        continue;
                    }
                    support[..r].copy_from_slice(&parent);
                    support[r] = l;
                    let (lo, hi) = hermitian_extremes(&g.principal(&support));
                    best.offer(lo, hi, &support);
                }
            }
        }
        if r == 1 || !advance_rest(&mut rest, first + 1, d) {
            break;
        }
    }
    best
}

// Next increasing combination of `rest.len()` values from [lo, d - 1), leaving
// room for at least one child index.
fn advance_rest(rest: &mut [usize], lo: usize, d: usize) -> bool {
    let n = d - 1 - lo;
    let mut shifted: Vec<usize> = rest.iter().map(|v| v - lo).collect();
    if !next_combination(&mut shifted, n) {
        return false;
    }
    for (r, s) in rest.iter_mut().zip(shifted) {
        *r = s + lo;
    }
    true
}

/// Largest deviation over `trials` uniformly random `k`-supports. Columns are
/// extracted by applying the operator to basis vectors, so the value is a
/// lower bound on the true constant.
pub fn mc_rip_lower_bound(op: &SketchOperator, k: usize, trials: usize, rng: &mut Rng) -> Result<RipReport> {
    let start = Instant::now();
    let d = op.dim();
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!("sparsity k = {k} must lie in [1, {d}]")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut columns: HashMap<usize, Vec<Complex64>> = HashMap::new();
    let mut best = Extremes::empty();
    for _ in 0..trials {
        let mut support = rand::seq::index::sample(rng, d, k).into_vec();
        support.sort_unstable();
        for &j in &support {
            if let Entry::Vacant(slot) = columns.entry(j) {
                slot.insert(op.column(j)?);
            }
        }
        let cols: Vec<Vec<Complex64>> = support.iter().map(|j| columns[j].clone()).collect();
        let (lo, hi) = hermitian_extremes(&gram_of_columns(&cols));
        best.offer(lo, hi, &support);
    }
    Ok(RipReport {
        k,
        method: RipMethod::MonteCarlo,
        epsilon: best.eps,
        worst_support: best.support,
        worst_lambda_min: best.lo,
        worst_lambda_max: best.hi,
        supports_evaluated: trials as u64,
        seed: None,
        wall_time: start.elapsed().as_secs_f64(),
        library_version: crate::VERSION.to_string(),
    })
}
