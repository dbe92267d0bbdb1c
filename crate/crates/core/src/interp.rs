//! Interpolation at node sequences: Newton form, error traces and Lebesgue
//! functions.
//!
//! Both the Newton table and the Lebesgue weights are extended one node at a
//! time, which matches how node sequences are consumed: prefix by prefix.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{CompactDomain, ComplexPoint};
use crate::error::{LejaError, Result};
use crate::functions::TestFunction;
use crate::polyeval::{better, log_abs_pi, PARALLEL_THRESHOLD};

/// Below this distance to a node the Lebesgue function is summed directly.
pub const NEAR_NODE: f64 = 1e-8;

/// Incrementally built Newton interpolant.
#[derive(Clone, Debug, Default)]
pub struct NewtonInterpolant {
    nodes: Vec<ComplexPoint>,
    coeffs: Vec<ComplexPoint>,
    /// Last row of the divided-difference table: `diag[j] = f[z_{n−1−j}, …, z_{n−1}]`.
    diag: Vec<ComplexPoint>,
}

impl NewtonInterpolant {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(nodes: &[ComplexPoint], values: &[ComplexPoint]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(LejaError::InvalidConfig(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        let mut p = Self::new();
        for (&z, &f) in nodes.iter().zip(values) {
            p.push(z, f)?;
        }
        Ok(p)
    }

    /// Appends a node; exactly one new coefficient is produced.
    pub fn push(&mut self, z: ComplexPoint, value: ComplexPoint) -> Result<()> {
        let n = self.nodes.len();
        let mut row = Vec::with_capacity(n + 1);
        row.push(value);
        for j in 1..=n {
            let other = self.nodes[n - j];
            let h = z - other;
            if h == Complex64::new(0.0, 0.0) {
                return Err(LejaError::CoincidentNodes { first: n - j, second: n });
            }
            row.push((row[j - 1] - self.diag[j - 1]) / h);
        }
        self.coeffs.push(row[n]);
        self.nodes.push(z);
        self.diag = row;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ComplexPoint] {
        &self.nodes
    }

    pub fn coefficients(&self) -> &[ComplexPoint] {
        &self.coeffs
    }

    /// Nested (Horner-like) evaluation of the Newton form.
    pub fn eval(&self, z: ComplexPoint) -> ComplexPoint {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..self.coeffs.len()).rev() {
            acc = acc * (z - self.nodes[k]) + self.coeffs[k];
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationResult {
    pub newton_coefficients: Vec<ComplexPoint>,
    pub nodes: Vec<ComplexPoint>,
    /// `(n, max_grid |L_n f − f|)`.
    pub error_trace: Vec<(usize, f64)>,
}

/// Interpolates `f_values` at `nodes`; the error trace is left empty.
pub fn newton_interpolate(nodes: &[ComplexPoint], f_values: &[ComplexPoint]) -> Result<InterpolationResult> {
    let p = NewtonInterpolant::from_values(nodes, f_values)?;
    Ok(InterpolationResult {
        newton_coefficients: p.coeffs,
        nodes: p.nodes,
        error_trace: Vec::new(),
    })
}

/// Sup-norm interpolation error of every prefix `n = 1..=len` on a grid of
/// about `eval_grid_size` points.
pub fn error_trace<F>(
    domain: &CompactDomain,
    nodes: &[ComplexPoint],
    f: F,
    eval_grid_size: usize,
) -> Result<InterpolationResult>
where
    F: Fn(ComplexPoint) -> ComplexPoint + Sync,
{
    let grid = domain.eval_grid(eval_grid_size);
    error_trace_on_grid(&grid, nodes, f)
}

/// [`error_trace`] on an explicit grid.
pub fn error_trace_on_grid<F>(grid: &[ComplexPoint], nodes: &[ComplexPoint], f: F) -> Result<InterpolationResult>
where
    F: Fn(ComplexPoint) -> ComplexPoint + Sync,
{
    let check = |z: ComplexPoint, v: ComplexPoint| -> Result<()> {
        if v.re.is_finite() && v.im.is_finite() {
            Ok(())
        } else {
            Err(LejaError::NonFiniteFunction { name: "f".into(), re: z.re, im: z.im })
        }
    };
    let mut p = NewtonInterpolant::new();
    for &z in nodes {
        let v = f(z);
        check(z, v)?;
        p.push(z, v)?;
    }

    // per grid point: target value, partial sum, Newton basis product
    struct State {
        z: ComplexPoint,
        target: ComplexPoint,
        sum: ComplexPoint,
        basis: ComplexPoint,
    }
    let mut states = Vec::with_capacity(grid.len());
    for &z in grid {
        let target = f(z);
        check(z, target)?;
        states.push(State { z, target, sum: Complex64::new(0.0, 0.0), basis: Complex64::new(1.0, 0.0) });
    }

    let mut trace = Vec::with_capacity(nodes.len());
    for (k, (&zk, &ck)) in p.nodes.iter().zip(&p.coeffs).enumerate() {
        let step = |s: &mut State| -> f64 {
            s.sum += ck * s.basis;
            s.basis *= s.z - zk;
            (s.sum - s.target).norm()
        };
        let err = if states.len() >= PARALLEL_THRESHOLD {
            states.par_iter_mut().map(step).reduce(|| 0.0, f64::max)
        } else {
            states.iter_mut().map(step).fold(0.0, f64::max)
        };
        trace.push((k + 1, err));
    }

    Ok(InterpolationResult { newton_coefficients: p.coeffs, nodes: p.nodes, error_trace: trace })
}

/// Error trace for a named function, checking it is admissible on `domain`.
pub fn error_trace_named(
    domain: &CompactDomain,
    nodes: &[ComplexPoint],
    function: TestFunction,
    eval_grid_size: usize,
) -> Result<InterpolationResult> {
    function.check_domain(domain)?;
    error_trace(domain, nodes, |z| function.eval(z), eval_grid_size).map_err(|e| match e {
        LejaError::NonFiniteFunction { re, im, .. } => {
            LejaError::NonFiniteFunction { name: function.name().into(), re, im }
        }
        other => other,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LebesgueEstimate {
    pub n: usize,
    /// Grid maximum of `λ_n`; a lower bound for `Λ_n`.
    pub value: f64,
    pub argmax_point: ComplexPoint,
}

/// `W_i = Σ_{j≠i} ln|z_i − z_j|` for every node.
fn log_weights(nodes: &[ComplexPoint]) -> Result<Vec<f64>> {
    let mut w = vec![0.0; nodes.len()];
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let d = (nodes[i] - nodes[j]).norm();
            if d == 0.0 {
                return Err(LejaError::CoincidentNodes { first: i, second: j });
            }
            let l = d.ln();
            w[i] += l;
            w[j] += l;
        }
    }
    Ok(w)
}

/// Shifted barycentric magnitudes `s_i = exp(−W_i − shift)`, `max s_i = 1`.
fn scaled_weights(log_w: &[f64]) -> (Vec<f64>, f64) {
    let shift = log_w.iter().map(|w| -w).fold(f64::NEG_INFINITY, f64::max);
    (log_w.iter().map(|w| (-w - shift).exp()).collect(), shift)
}

/// `λ_n(z) = Σ_i exp(Σ_{j≠i} ln|z − z_j| − W_i)`, one term at a time.
fn lebesgue_direct(nodes: &[ComplexPoint], log_w: &[f64], z: ComplexPoint) -> f64 {
    let mut total = 0.0;
    for (i, &wi) in log_w.iter().enumerate() {
        let mut l = 0.0;
        for (j, &w) in nodes.iter().enumerate() {
            if j != i {
                l += (z - w).norm().ln();
            }
        }
        total += (l - wi).exp();
    }
    total
}

/// Barycentric form `|π_n(z)| · Σ_i e^{−W_i} / |z − z_i|`, evaluated with a
/// shift so that nothing overflows.
#[inline]
fn lebesgue_barycentric(nodes: &[ComplexPoint], scaled: &[f64], shift: f64, log_pi: f64, z: ComplexPoint) -> f64 {
    let mut s = 0.0;
    for (&w, &si) in nodes.iter().zip(scaled) {
        s += si / (z - w).norm_sqr().sqrt();
    }
    (log_pi + shift + s.ln()).exp()
}

/// The Lebesgue function `λ_n(z)` of `nodes`.
pub fn lebesgue_function(nodes: &[ComplexPoint], z: ComplexPoint) -> Result<f64> {
    if nodes.len() == 1 {
        return Ok(1.0);
    }
    let log_w = log_weights(nodes)?;
    let near = nodes.iter().map(|&w| (z - w).norm()).fold(f64::INFINITY, f64::min);
    if near < NEAR_NODE {
        return Ok(lebesgue_direct(nodes, &log_w, z));
    }
    let (scaled, shift) = scaled_weights(&log_w);
    Ok(lebesgue_barycentric(nodes, &scaled, shift, log_abs_pi(nodes, z), z))
}

/// Grid maximum of `λ_n` for the full node set.
pub fn lebesgue_estimate(nodes: &[ComplexPoint], grid: &[ComplexPoint]) -> Result<LebesgueEstimate> {
    let n = nodes.len();
    let series = lebesgue_series(nodes, grid, n..=n)?;
    Ok(series[0])
}

/// One [`LebesgueEstimate`] per prefix length in `n_range`.
///
/// Weights `W_i` and the per-point `ln|π_n(z)|` are extended in O(n) and O(1)
/// per added node; each requested `n` then costs one O(n) pass per grid point.
pub fn lebesgue_series(
    nodes: &[ComplexPoint],
    grid: &[ComplexPoint],
    n_range: RangeInclusive<usize>,
) -> Result<Vec<LebesgueEstimate>> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if grid.is_empty() {
        return Err(LejaError::InvalidConfig("Lebesgue grid is empty".into()));
    }
    if lo < 1 || hi > nodes.len() || lo > hi {
        return Err(LejaError::InvalidConfig(format!(
            "n range {lo}..={hi} outside 1..={}",
            nodes.len()
        )));
    }

    struct Point {
        z: ComplexPoint,
        log_pi: f64,
        nearest: f64,
    }
    let mut points: Vec<Point> = grid
        .iter()
        .map(|&z| Point { z, log_pi: 0.0, nearest: f64::INFINITY })
        .collect();
    let mut log_w: Vec<f64> = Vec::with_capacity(hi);
    let mut out = Vec::with_capacity(hi - lo + 1);

    for n in 1..=hi {
        let zn = nodes[n - 1];
        // extend weights with node n-1
        let mut wn = 0.0;
        for (i, wi) in log_w.iter_mut().enumerate() {
            let d = (nodes[i] - zn).norm();
            if d == 0.0 {
                return Err(LejaError::CoincidentNodes { first: i, second: n - 1 });
            }
            let l = d.ln();
            *wi += l;
            wn += l;
        }
        log_w.push(wn);

        let extend = |p: &mut Point| {
            let d = (p.z - zn).norm_sqr().sqrt();
            p.log_pi += d.ln();
            p.nearest = p.nearest.min(d);
        };
        if points.len() >= PARALLEL_THRESHOLD {
            points.par_iter_mut().for_each(extend);
        } else {
            points.iter_mut().for_each(extend);
        }

        if n < lo {
            continue;
        }
        let prefix = &nodes[..n];
        let (scaled, shift) = scaled_weights(&log_w);
        let eval = |(i, p): (usize, &Point)| -> (usize, f64) {
            // a single node interpolates by constants, so λ_1 ≡ 1 exactly
            let v = if n == 1 {
                1.0
            } else if p.nearest < NEAR_NODE {
                lebesgue_direct(prefix, &log_w, p.z)
            } else {
                lebesgue_barycentric(prefix, &scaled, shift, p.log_pi, p.z)
            };
            (i, v)
        };
        let identity = (usize::MAX, f64::NEG_INFINITY);
        let (idx, value) = if points.len() >= PARALLEL_THRESHOLD {
            points.par_iter().enumerate().map(eval).reduce(|| identity, better)
        } else {
            points.iter().enumerate().map(eval).fold(identity, better)
        };
        out.push(LebesgueEstimate { n, value, argmax_point: grid[idx.min(grid.len() - 1)] });
    }
    Ok(out)
}

/// Convenience: Lebesgue series on the domain's own evaluation grid.
pub fn lebesgue_series_on_domain(
    domain: &CompactDomain,
    nodes: &[ComplexPoint],
    grid_size: usize,
    n_range: RangeInclusive<usize>,
) -> Result<Vec<LebesgueEstimate>> {
    lebesgue_series(nodes, &domain.eval_grid(grid_size), n_range)
}
