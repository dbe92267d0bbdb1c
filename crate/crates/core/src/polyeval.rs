//! Log-domain evaluation of the nodal polynomial `π_n(z) = ∏_{j<n} (z − z_j)`.
//!
//! `|π_n|` under- or overflows long before `n` reaches a few hundred, so every
//! comparison goes through `ln|π_n(z)| = Σ_j ln|z − z_j|`. Terms are grouped in
//! short blocks whose squared moduli are multiplied before a single logarithm;
//! a block that leaves the safe exponent range falls back to per-term logs.
//! Block logarithms are accumulated with Neumaier compensation.

use rayon::prelude::*;

use crate::domain::ComplexPoint;
use crate::error::{LejaError, Result};

const BLOCK: usize = 8;
const SAFE_LO: f64 = 1e-280;
const SAFE_HI: f64 = 1e280;

/// Grids at least this large are reduced in parallel.
pub const PARALLEL_THRESHOLD: usize = 4096;

/// Neumaier (improved Kahan–Babuška) compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `Σ_j ln|z − z_j|` over all of `nodes`; `-∞` when `z` is a node, `0` for no nodes.
#[inline]
pub fn log_abs_pi(nodes: &[ComplexPoint], z: ComplexPoint) -> f64 {
    let mut acc = CompensatedSum::default();
    for chunk in nodes.chunks(BLOCK) {
        let mut prod = 1.0;
        for &w in chunk {
            prod *= (z - w).norm_sqr();
        }
        if prod > SAFE_LO && prod < SAFE_HI {
            acc.add(0.5 * prod.ln());
        } else {
            for &w in chunk {
                let d = (z - w).norm_sqr();
                if d == 0.0 {
                    return f64::NEG_INFINITY;
                }
                acc.add(0.5 * d.ln());
            }
        }
    }
    acc.value()
}

/// Total order used by every argmax in the crate: larger value wins, ties go
/// to the smaller index. `-∞` loses to every finite value.
#[inline]
pub fn better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Argmax of `f` over `points`, with the tie-break of [`better`]. Large inputs
/// are reduced in parallel; the result does not depend on the thread count.
pub fn argmax_by<F>(points: &[ComplexPoint], f: F) -> (usize, f64)
where
    F: Fn(ComplexPoint) -> f64 + Sync,
{
    assert!(!points.is_empty(), "argmax over an empty set");
    let identity = (usize::MAX, f64::NEG_INFINITY);
    let best = if points.len() >= PARALLEL_THRESHOLD {
        points
            .par_iter()
            .enumerate()
            .map(|(i, &z)| (i, f(z)))
            .reduce(|| identity, better)
    } else {
        points.iter().enumerate().map(|(i, &z)| (i, f(z))).fold(identity, better)
    };
    if best.0 == usize::MAX {
        // every value was -inf (or NaN): first point by convention
        (0, best.1)
    } else {
        best
    }
}

/// Grid maximum of `ln|π_n|` and the first grid point attaining it.
pub fn sup_norm_estimate(nodes: &[ComplexPoint], grid: &[ComplexPoint]) -> (f64, ComplexPoint) {
    let (i, v) = argmax_by(grid, |z| log_abs_pi(nodes, z));
    (v, grid[i])
}

/// `Σ_{i<j} ln|z_i − z_j|`, erroring on coincident nodes.
pub fn pairwise_log_product(nodes: &[ComplexPoint]) -> Result<f64> {
    if nodes.len() < 2 {
        return Err(LejaError::InsufficientData("pairwise product needs at least 2 nodes".into()));
    }
    let mut acc = CompensatedSum::default();
    for (i, &zi) in nodes.iter().enumerate() {
        let row = log_abs_pi(&nodes[i + 1..], zi);
        if row == f64::NEG_INFINITY {
            let j = nodes[i + 1..].iter().position(|&w| w == zi).map_or(i + 1, |p| i + 1 + p);
            return Err(LejaError::CoincidentNodes { first: i, second: j });
        }
        acc.add(row);
    }
    Ok(acc.value())
}

/// Smallest pairwise distance, `+∞` for fewer than two nodes.
pub fn min_pairwise_distance(nodes: &[ComplexPoint]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}
