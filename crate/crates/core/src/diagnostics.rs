//! Quality diagnostics for node sequences.
//!
//! Capacity estimators, comparison of the empirical node distribution with
//! the equilibrium measure, separation, pseudo-Leja quality ratios, and the
//! least-squares fits used to summarise growth and convergence rates.

use std::f64::consts::PI;
use std::io::Write;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::domain::{CompactDomain, ComplexPoint, Shape};
use crate::error::{LejaError, Result};
use crate::functions::TestFunction;
use crate::interp::{error_trace_named, lebesgue_series};
use crate::nodes::{fmt_f64, Method, NodeSequence};
use crate::polyeval::{log_abs_pi, pairwise_log_product, sup_norm_estimate};

/// Plateau cutoff for geometric-rate fits, relative to the largest error.
pub const DEFAULT_RATE_CUTOFF: f64 = 1e-13;

/// `‖π_n‖^{1/n}` with the sup norm estimated on `grid`.
pub fn capacity_supnorm(nodes: &[ComplexPoint], grid: &[ComplexPoint]) -> Result<f64> {
    if nodes.is_empty() {
        return Err(LejaError::InsufficientData("capacity needs at least one node".into()));
    }
    if grid.is_empty() {
        return Err(LejaError::InvalidConfig("empty grid".into()));
    }
    Ok((sup_norm_estimate(nodes, grid).0 / nodes.len() as f64).exp())
}

/// `(∏_{i<j} |z_i − z_j|)^{2/(n(n−1))}`.
pub fn capacity_transfinite(nodes: &[ComplexPoint]) -> Result<f64> {
    let n = nodes.len() as f64;
    Ok((2.0 * pairwise_log_product(nodes)? / (n * (n - 1.0))).exp())
}

/// Closed-form equilibrium measures, pushed forward to a scalar coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceDensity {
    /// Arcsine law on a segment `a → b`, in the coordinate `t ∈ [−1, 1]`.
    Arcsine { a: ComplexPoint, b: ComplexPoint },
    /// Uniform law on the circle `|z − center| = r` (also the equilibrium
    /// measure of the disk), in the angle `θ ∈ [0, 2π)`.
    UniformAngle { center: ComplexPoint },
}

impl ReferenceDensity {
    pub fn for_domain(domain: &CompactDomain) -> Result<Self> {
        match domain.shape() {
            Shape::Segment { a, b } => Ok(Self::Arcsine {
                a: ComplexPoint::new(a[0], a[1]),
                b: ComplexPoint::new(b[0], b[1]),
            }),
            Shape::Circle { center, .. } | Shape::Disk { center, .. } => {
                Ok(Self::UniformAngle { center: ComplexPoint::new(center[0], center[1]) })
            }
            _ => Err(LejaError::ReferenceUnavailable(domain.kind_name())),
        }
    }

    pub fn project(&self, z: ComplexPoint) -> f64 {
        match *self {
            Self::Arcsine { a, b } => {
                let d = b - a;
                (2.0 * ((z - a) * d.conj()).re / d.norm_sqr() - 1.0).clamp(-1.0, 1.0)
            }
            Self::UniformAngle { center } => {
                let w = z - center;
                w.im.atan2(w.re).rem_euclid(2.0 * PI)
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Arcsine { .. } => (-1.0, 1.0),
            Self::UniformAngle { .. } => (0.0, 2.0 * PI),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self {
            Self::Arcsine { .. } => {
                if x.abs() < 1.0 {
                    1.0 / (PI * (1.0 - x * x).sqrt())
                } else {
                    0.0
                }
            }
            Self::UniformAngle { .. } => {
                if (0.0..2.0 * PI).contains(&x) {
                    1.0 / (2.0 * PI)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Arcsine { .. } => 0.5 + x.clamp(-1.0, 1.0).asin() / PI,
            Self::UniformAngle { .. } => (x / (2.0 * PI)).clamp(0.0, 1.0),
        }
    }
}

/// Kolmogorov–Smirnov distance between the empirical law of `values` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    /// Normalized so that `Σ density·width = 1`.
    pub density: f64,
}

pub fn histogram(values: &[f64], bins: usize, range: (f64, f64)) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let (lo, hi) = range;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in values {
        let k = (((x - lo) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = values.len().max(1) as f64;
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| HistogramBin {
            left: lo + k as f64 * width,
            right: if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width },
            density: c as f64 / (total * width),
        })
        .collect()
}

pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_left", "bin_right", "density"])?;
    for b in bins {
        w.write_record([fmt_f64(b.left), fmt_f64(b.right), fmt_f64(b.density)])?;
    }
    w.flush()?;
    Ok(())
}

/// A projection of the plane onto a scalar coordinate.
pub type Projection = Box<dyn Fn(ComplexPoint) -> f64 + Send + Sync>;

/// Scalar coordinate used for histograms: the reference projection where a
/// reference exists, the angle about the vertex centroid for polygons, the
/// real part for interval unions.
pub fn projection(domain: &CompactDomain) -> (Projection, (f64, f64)) {
    if let Ok(r) = ReferenceDensity::for_domain(domain) {
        let range = r.support();
        return (Box::new(move |z| r.project(z)), range);
    }
    match domain.shape() {
        Shape::Polygon { vertices } => {
            let n = vertices.len() as f64;
            let c = ComplexPoint::new(
                vertices.iter().map(|v| v[0]).sum::<f64>() / n,
                vertices.iter().map(|v| v[1]).sum::<f64>() / n,
            );
            (Box::new(move |z: ComplexPoint| (z - c).im.atan2((z - c).re).rem_euclid(2.0 * PI)), (0.0, 2.0 * PI))
        }
        Shape::IntervalUnion { intervals } => {
            let lo = intervals.iter().map(|iv| iv[0]).fold(f64::INFINITY, f64::min);
            let hi = intervals.iter().map(|iv| iv[1]).fold(f64::NEG_INFINITY, f64::max);
            (Box::new(|z: ComplexPoint| z.re), (lo, hi))
        }
        _ => unreachable!("reference exists for the remaining kinds"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureComparison {
    pub ks_distance: f64,
    pub histogram: Vec<HistogramBin>,
}

/// KS distance to the equilibrium measure plus a normalized histogram.
/// Fails with [`LejaError::ReferenceUnavailable`] where no closed form is
/// known; [`empirical_histogram`] still works there.
pub fn empirical_measure_test(domain: &CompactDomain, nodes: &[ComplexPoint], bins: usize) -> Result<MeasureComparison> {
    let reference = ReferenceDensity::for_domain(domain)?;
    let values: Vec<f64> = nodes.iter().map(|&z| reference.project(z)).collect();
    Ok(MeasureComparison {
        ks_distance: ks_distance(&values, |x| reference.cdf(x)),
        histogram: histogram(&values, bins, reference.support()),
    })
}

pub fn empirical_histogram(domain: &CompactDomain, nodes: &[ComplexPoint], bins: usize) -> Vec<HistogramBin> {
    let (proj, range) = projection(domain);
    let values: Vec<f64> = nodes.iter().map(|&z| proj(z)).collect();
    histogram(&values, bins, range)
}

/// `(n, min_{j<n} |z_n − z_j|)` for `n ≥ 1`.
pub fn separation_series(nodes: &[ComplexPoint]) -> Vec<(usize, f64)> {
    (1..nodes.len())
        .map(|n| (n, nodes[..n].iter().map(|&w| (nodes[n] - w).norm()).fold(f64::INFINITY, f64::min)))
        .collect()
}

/// Running minimum of a series.
pub fn lower_envelope(series: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut m = f64::INFINITY;
    series
        .iter()
        .map(|&(n, v)| {
            m = m.min(v);
            (n, m)
        })
        .collect()
}

/// `(n, |π_n(z_n)| / max_grid |π_n|)` for every `n ≥ 1` of the sequence.
pub fn pseudo_leja_ratio_series(nodes: &[ComplexPoint], grid: &[ComplexPoint]) -> Vec<(usize, f64)> {
    (1..nodes.len())
        .map(|n| {
            let prefix = &nodes[..n];
            (n, (log_abs_pi(prefix, nodes[n]) - sup_norm_estimate(prefix, grid).0).exp())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    LinearFit { slope, intercept, r_squared }
}

/// Least squares of `ln value` on `ln n` over `n_min ≤ n ≤ n_max`.
pub fn loglog_slope(series: &[(usize, f64)], n_min: usize, n_max: usize) -> Result<LinearFit> {
    let pts: Vec<(usize, f64)> = series.iter().copied().filter(|&(n, _)| n >= n_min && n <= n_max).collect();
    if pts.len() < 3 {
        return Err(LejaError::InsufficientData(format!(
            "log-log fit needs at least 3 points in {n_min}..={n_max}, found {}",
            pts.len()
        )));
    }
    if let Some(&(n, v)) = pts.iter().find(|&&(n, v)| n == 0 || v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
        return Err(LejaError::InsufficientData(format!("nonpositive entry ({n}, {v}) in log-log fit")));
    }
    let xs: Vec<f64> = pts.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, v)| v.ln()).collect();
    Ok(least_squares(&xs, &ys))
}

/// Geometric convergence factor `ρ` from `ln e_n ≈ a + n ln ρ`, fitted over
/// entries above `cutoff_ratio · max e_n` (this drops the round-off plateau).
pub fn geometric_rate(series: &[(usize, f64)], cutoff_ratio: f64) -> Result<f64> {
    let max = series.iter().map(|&(_, e)| e).filter(|e| e.is_finite()).fold(0.0, f64::max);
    let threshold = cutoff_ratio * max;
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(_, e)| e.is_finite() && e > 0.0 && e > threshold)
        .map(|&(n, e)| (n as f64, e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(LejaError::InsufficientData(format!(
            "geometric fit needs at least 3 usable points, found {}",
            pts.len()
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Ok(least_squares(&xs, &ys).slope.exp())
}

/// Settings for [`QualityReport::compute`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSettings {
    /// Grid for sup-norm quantities (capacity, pseudo-Leja ratio).
    pub eval_grid: usize,
    pub lebesgue_grid: usize,
    pub lebesgue_range: (usize, usize),
    pub function: Option<TestFunction>,
    pub rate_cutoff: f64,
}

impl Default for ReportSettings {
    fn default() -> Self {
        Self {
            eval_grid: 10_000,
            lebesgue_grid: 50_000,
            lebesgue_range: (10, 200),
            function: None,
            rate_cutoff: DEFAULT_RATE_CUTOFF,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub seed: Option<u64>,
    pub method: Method,
    pub domain: CompactDomain,
    pub node_count: usize,
    pub eval_grid: usize,
    pub lebesgue_grid: usize,
}

/// Columnar per-`n` metrics. Row `n` (1-based) describes the first `n` nodes
/// and the next node `z_n`, so the separation and ratio columns are `null` on
/// the last row and the transfinite column is `null` on the first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerNColumns {
    pub n: Vec<usize>,
    pub lebesgue: Vec<f64>,
    pub min_separation: Vec<Option<f64>>,
    pub capacity_supnorm: Vec<f64>,
    pub capacity_transfinite: Vec<Option<f64>>,
    pub pseudo_leja_ratio: Vec<Option<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FittedExponents {
    pub lebesgue_slope: Option<f64>,
    pub separation_slope: Option<f64>,
    pub geometric_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub metadata: ReportMetadata,
    pub per_n: PerNColumns,
    pub fitted: FittedExponents,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_trace: Option<Vec<(usize, f64)>>,
}

impl QualityReport {
    pub fn compute(seq: &NodeSequence, settings: &ReportSettings) -> Result<Self> {
        let nodes = &seq.nodes;
        let len = nodes.len();
        if len < 2 {
            return Err(LejaError::InsufficientData("a report needs at least 2 nodes".into()));
        }
        let domain = &seq.domain;
        let grid = domain.eval_grid(settings.eval_grid);
        let lgrid = domain.eval_grid(settings.lebesgue_grid);

        let lebesgue: Vec<f64> = lebesgue_series(nodes, &lgrid, 1..=len)?.into_iter().map(|e| e.value).collect();
        let separation = separation_series(nodes);
        let ratio = pseudo_leja_ratio_series(nodes, &grid);

        // transfinite diameters of all prefixes via the telescoping sum
        let mut transfinite = vec![None];
        let mut pair_sum = 0.0;
        for n in 2..=len {
            pair_sum += log_abs_pi(&nodes[..n - 1], nodes[n - 1]);
            let m = n as f64;
            transfinite.push(Some((2.0 * pair_sum / (m * (m - 1.0))).exp()));
        }

        let mut cols = PerNColumns::default();
        for n in 1..=len {
            cols.n.push(n);
            cols.lebesgue.push(lebesgue[n - 1]);
            cols.capacity_supnorm.push(capacity_supnorm(&nodes[..n], &grid)?);
            cols.capacity_transfinite.push(transfinite[n - 1]);
            cols.min_separation.push(separation.get(n - 1).map(|s| s.1));
            cols.pseudo_leja_ratio.push(ratio.get(n - 1).map(|r| r.1));
        }

        let (lo, hi) = settings.lebesgue_range;
        let leb_series: Vec<(usize, f64)> = cols.n.iter().copied().zip(cols.lebesgue.iter().copied()).collect();
        let lebesgue_slope = loglog_slope(&leb_series, lo, hi).ok().map(|f| f.slope);
        let separation_slope = loglog_slope(&lower_envelope(&separation), lo, hi).ok().map(|f| f.slope);

        let (error_trace, geometric) = match settings.function {
            Some(f) => {
                let t = error_trace_named(domain, nodes, f, settings.eval_grid)?.error_trace;
                let rate = geometric_rate(&t, settings.rate_cutoff).ok();
                (Some(t), rate)
            }
            None => (None, None),
        };

        Ok(Self {
            metadata: ReportMetadata {
                seed: seq.seed,
                method: seq.method,
                domain: domain.clone(),
                node_count: len,
                eval_grid: settings.eval_grid,
                lebesgue_grid: settings.lebesgue_grid,
            },
            per_n: cols,
            fitted: FittedExponents { lebesgue_slope, separation_slope, geometric_rate: geometric },
            error_trace,
        })
    }

    pub fn lebesgue_series(&self) -> Vec<(usize, f64)> {
        self.per_n.n.iter().copied().zip(self.per_n.lebesgue.iter().copied()).collect()
    }
}

/// Mean and spread of Lebesgue constants over independent draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub draws: usize,
    pub n: Vec<usize>,
    pub per_n_mean: Vec<f64>,
    pub per_n_sd: Vec<f64>,
    pub mean_lebesgue_slope: f64,
    /// `None` when some standard deviation is zero.
    pub sd_lebesgue_slope: Option<f64>,
}

/// Per-`n` sample mean and standard deviation of `Λ_n` over `series` (one
/// Lebesgue series per draw), with log-log slopes over `n_range`.
pub fn ensemble_stats(series: &[Vec<(usize, f64)>], n_range: RangeInclusive<usize>) -> Result<EnsembleStats> {
    if series.len() < 2 {
        return Err(LejaError::InsufficientData("ensemble statistics need at least 2 draws".into()));
    }
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let restrict = |s: &Vec<(usize, f64)>| -> Vec<(usize, f64)> {
        s.iter().copied().filter(|&(n, _)| n >= lo && n <= hi).collect()
    };
    let first = restrict(&series[0]);
    let ns: Vec<usize> = first.iter().map(|p| p.0).collect();
    let rows: Vec<Vec<(usize, f64)>> = series.iter().map(restrict).collect();
    for r in &rows {
        if r.iter().map(|p| p.0).ne(ns.iter().copied()) {
            return Err(LejaError::InvalidConfig("ensemble members cover different n ranges".into()));
        }
    }
    let m = rows.len() as f64;
    let mut mean = Vec::with_capacity(ns.len());
    let mut sd = Vec::with_capacity(ns.len());
    for k in 0..ns.len() {
        let mu = rows.iter().map(|r| r[k].1).sum::<f64>() / m;
        let var = rows.iter().map(|r| (r[k].1 - mu).powi(2)).sum::<f64>() / (m - 1.0);
        mean.push(mu);
        sd.push(var.sqrt());
    }
    let zip = |v: &[f64]| -> Vec<(usize, f64)> { ns.iter().copied().zip(v.iter().copied()).collect() };
    let mean_fit = loglog_slope(&zip(&mean), lo, hi)?;
    let sd_fit = loglog_slope(&zip(&sd), lo, hi).ok();
    Ok(EnsembleStats {
        draws: rows.len(),
        n: ns,
        per_n_mean: mean,
        per_n_sd: sd,
        mean_lebesgue_slope: mean_fit.slope,
        sd_lebesgue_slope: sd_fit.map(|f| f.slope),
    })
}

/// [`ensemble_stats`] over full reports.
pub fn ensemble_stats_from_reports(reports: &[QualityReport], n_range: RangeInclusive<usize>) -> Result<EnsembleStats> {
    let series: Vec<_> = reports.iter().map(QualityReport::lebesgue_series).collect();
    ensemble_stats(&series, n_range)
}
