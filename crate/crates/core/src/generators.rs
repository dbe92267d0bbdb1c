//! Node generators: grid Leja, boundary-mesh pseudo-Leja, Metropolis–Hastings
//! (MH) points, randomized-mesh (RM) points and rejection-sampled random Leja
//! points.
//!
//! Every random step `n` reads its randomness from substreams keyed by
//! `(seed, n, k, purpose)`, so generation is hierarchical (the first `n` nodes
//! of a longer run equal a run of length `n`) and RM candidate evaluation can
//! be spread over threads without changing the result.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{CompactDomain, ComplexPoint};
use crate::error::{LejaError, Result};
use crate::nodes::{Method, NodeSequence};
use crate::polyeval::{argmax_by, log_abs_pi, sup_norm_estimate};
use crate::rng::{Purpose, StreamFactory};

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_GRID_SIZE: usize = 10_000;
pub const DEFAULT_MESH_MULTIPLIER: f64 = 4.0;
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// RM steps with at least this many candidates are evaluated in parallel.
const RM_PARALLEL_THRESHOLD: u64 = 2048;

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_grid_size() -> usize {
    DEFAULT_GRID_SIZE
}

fn default_mesh_multiplier() -> f64 {
    DEFAULT_MESH_MULTIPLIER
}

fn default_max_attempts() -> u64 {
    DEFAULT_MAX_ATTEMPTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub method: Method,
    pub n_target: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    /// Grid size for grid Leja and for the rejection bound.
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_override: Option<f64>,
    /// Constant `c` in the boundary mesh size `⌈c·n^{r_m}⌉`.
    #[serde(default = "default_mesh_multiplier")]
    pub mesh_multiplier: f64,
    /// Attempts per node before rejection sampling reports a failed bound.
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
    /// Starting node for grid Leja; the first grid point when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leja_start: Option<[f64; 2]>,
}

impl GeneratorConfig {
    pub fn new(method: Method, n_target: usize, seed: u64) -> Self {
        Self {
            method,
            n_target,
            epsilon: DEFAULT_EPSILON,
            seed,
            grid_size: DEFAULT_GRID_SIZE,
            alpha_override: None,
            mesh_multiplier: DEFAULT_MESH_MULTIPLIER,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            leja_start: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LejaError::InvalidConfig(m));
        if self.n_target < 1 {
            return bad("n_target must be at least 1".into());
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if let Some(a) = self.alpha_override {
            if !(a.is_finite() && a > 0.0) {
                return bad(format!("alpha_override must be positive, got {a}"));
            }
        }
        if self.grid_size < 2 {
            return bad("grid_size must be at least 2".into());
        }
        if !(self.mesh_multiplier.is_finite() && self.mesh_multiplier > 0.0) {
            return bad("mesh_multiplier must be positive".into());
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be positive".into());
        }
        Ok(())
    }

    /// Growth exponent of `N_n`: the override if set, else `r_ℓ + ε` for MH and
    /// `r_m·r_c + ε` for RM. `None` for methods without a candidate count.
    pub fn alpha(&self, domain: &CompactDomain) -> Option<f64> {
        let e = domain.exponents();
        match self.method {
            Method::Mh => Some(self.alpha_override.unwrap_or(e.r_nikolskii + self.epsilon)),
            Method::Rm => Some(self.alpha_override.unwrap_or(e.r_markov * e.r_covering + self.epsilon)),
            _ => None,
        }
    }

    /// Number of candidates used at step `n` (1-based), if the method has one.
    pub fn candidates_at(&self, domain: &CompactDomain, n: usize) -> Option<u64> {
        match self.method {
            Method::Mh | Method::Rm => self.alpha(domain).map(|a| step_count(n, a)),
            Method::MeshPseudoLeja => Some(mesh_size(n, domain.exponents().r_markov, self.mesh_multiplier) as u64),
            Method::GridLeja => Some(self.grid_size as u64),
            Method::RejectionRandomLeja => None,
        }
    }
}

/// `N_n = max(1, ⌊n^α⌋)`. Values within `1e-9` (relative) of an integer are
/// rounded to it first, so exact powers do not floor one short.
pub fn step_count(n: usize, alpha: f64) -> u64 {
    let x = (n.max(1) as f64).powf(alpha);
    let r = x.round();
    let v = if (x - r).abs() <= 1e-9 * x.max(1.0) { r } else { x.floor() };
    (v as u64).max(1)
}

/// Boundary mesh size `⌈c·n^{r_m}⌉` at step `n` (`n = 0` is treated as 1).
pub fn mesh_size(n: usize, r_markov: f64, multiplier: f64) -> usize {
    (multiplier * (n.max(1) as f64).powf(r_markov)).ceil().max(1.0) as usize
}

/// Per-node progress report: step index, candidates used, time since start.
#[derive(Clone, Copy, Debug)]
pub struct Progress {
    pub n: usize,
    pub candidates: Option<u64>,
    pub elapsed: Duration,
}

/// Generates `config.n_target` nodes on `domain`.
pub fn generate(
    domain: &CompactDomain,
    config: &GeneratorConfig,
    mut progress: Option<&mut dyn FnMut(Progress)>,
) -> Result<NodeSequence> {
    config.validate()?;
    let start = Instant::now();
    let streams = StreamFactory::new(config.seed);
    let mut nodes: Vec<ComplexPoint> = Vec::with_capacity(config.n_target);

    let grid = match config.method {
        Method::GridLeja | Method::RejectionRandomLeja => domain.eval_grid(config.grid_size),
        _ => Vec::new(),
    };

    let z0 = match config.method {
        Method::GridLeja => match config.leja_start {
            Some([re, im]) => {
                let z = ComplexPoint::new(re, im);
                if !domain.contains(z) {
                    return Err(LejaError::InvalidConfig(format!("leja_start {z} is outside the domain")));
                }
                z
            }
            None => next_grid_leja_point(&[], &grid)?,
        },
        Method::MeshPseudoLeja => {
            let mesh = domain.boundary_mesh(mesh_size(0, domain.exponents().r_markov, config.mesh_multiplier))?;
            next_mesh_pseudo_leja_point(&[], &mesh)?
        }
        _ => initial_point(domain, &streams)?,
    };
    nodes.push(z0);
    if let Some(sink) = progress.as_deref_mut() {
        sink(Progress { n: 0, candidates: None, elapsed: start.elapsed() });
    }

    for n in 1..config.n_target {
        let candidates = config.candidates_at(domain, n);
        let z = match config.method {
            Method::GridLeja => next_grid_leja_point(&nodes, &grid)?,
            Method::MeshPseudoLeja => {
                let mesh = domain.boundary_mesh(candidates.unwrap() as usize)?;
                next_mesh_pseudo_leja_point(&nodes, &mesh)?
            }
            Method::Mh => next_mh_point(&nodes, domain, candidates.unwrap(), &streams)?,
            Method::Rm => next_rm_point(&nodes, domain, candidates.unwrap(), &streams)?,
            Method::RejectionRandomLeja => {
                next_rejection_point(&nodes, domain, &grid, &streams, config.max_attempts)?
            }
        };
        nodes.push(z);
        if let Some(sink) = progress.as_deref_mut() {
            sink(Progress { n, candidates, elapsed: start.elapsed() });
        }
    }

    Ok(NodeSequence {
        nodes,
        method: config.method,
        seed: config.method.is_random().then_some(config.seed),
        domain: domain.clone(),
    })
}

/// `z_0 ~ U_σ(K)` drawn from substream `(0, 0, init)`.
pub fn initial_point(domain: &CompactDomain, streams: &StreamFactory) -> Result<ComplexPoint> {
    domain.sample_uniform(&mut streams.stream(0, 0, Purpose::Init))
}

/// Metropolis–Hastings acceptance in log form.
///
/// A `-∞` candidate is never accepted (this covers the `0/0` case); a `-∞`
/// state accepts any finite candidate.
#[inline]
pub fn mh_accepts(log_u: f64, log_candidate: f64, log_state: f64) -> bool {
    if log_candidate == f64::NEG_INFINITY {
        false
    } else if log_state == f64::NEG_INFINITY {
        true
    } else {
        log_u <= log_candidate - log_state
    }
}

/// Outcome of one independent MH chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainOutcome {
    pub point: ComplexPoint,
    pub accepted: u64,
    pub evaluations: u64,
}

/// Independent Metropolis–Hastings chain of `steps` transitions.
///
/// `propose(k)` yields `X^{(k)}` for `k = 0..=steps`, `uniform(k)` yields
/// `U^{(k)} ∈ (0, 1]` for `k ≥ 1`. The target log-density of the current state
/// is cached, so `log_target` runs exactly `steps + 1` times.
pub fn independent_mh_chain<P, U, T>(steps: u64, mut propose: P, mut uniform: U, mut log_target: T) -> Result<ChainOutcome>
where
    P: FnMut(u64) -> Result<ComplexPoint>,
    U: FnMut(u64) -> f64,
    T: FnMut(ComplexPoint) -> f64,
{
    let mut state = propose(0)?;
    let mut log_state = log_target(state);
    let mut accepted = 0;
    for k in 1..=steps {
        let x = propose(k)?;
        let log_x = log_target(x);
        if mh_accepts(uniform(k).ln(), log_x, log_state) {
            state = x;
            log_state = log_x;
            accepted += 1;
        }
    }
    Ok(ChainOutcome { point: state, accepted, evaluations: steps + 1 })
}

/// The `n`-th MH point (`n = existing.len()`), targeting density `∝ |π_n|`.
pub fn next_mh_point(
    existing: &[ComplexPoint],
    domain: &CompactDomain,
    steps: u64,
    streams: &StreamFactory,
) -> Result<ComplexPoint> {
    let n = existing.len();
    let outcome = independent_mh_chain(
        steps.max(1),
        |k| domain.sample_uniform(&mut streams.stream(n, k, Purpose::Candidate)),
        |k| streams.stream(n, k, Purpose::Accept).uniform_positive(),
        |z| log_abs_pi(existing, z),
    )?;
    Ok(outcome.point)
}

/// Candidate `k` (1-based) of RM step `n`.
pub fn rm_candidate(
    domain: &CompactDomain,
    streams: &StreamFactory,
    n: usize,
    k: u64,
    purpose: Purpose,
) -> Result<ComplexPoint> {
    domain.sample_uniform(&mut streams.stream(n, k, purpose))
}

fn rm_argmax(
    existing: &[ComplexPoint],
    domain: &CompactDomain,
    count: u64,
    streams: &StreamFactory,
    purpose: Purpose,
) -> Result<(u64, f64, ComplexPoint)> {
    let n = existing.len();
    let eval = |k: u64| -> Result<(u64, f64, ComplexPoint)> {
        let z = rm_candidate(domain, streams, n, k, purpose)?;
        Ok((k, log_abs_pi(existing, z), z))
    };
    let pick = |a: (u64, f64, ComplexPoint), b: (u64, f64, ComplexPoint)| {
        if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
            b
        } else {
            a
        }
    };
    let identity = (u64::MAX, f64::NEG_INFINITY, ComplexPoint::new(0.0, 0.0));
    if count >= RM_PARALLEL_THRESHOLD {
        (1..=count).into_par_iter().map(eval).try_reduce(|| identity, |a, b| Ok(pick(a, b)))
    } else {
        (1..=count).map(eval).try_fold(identity, |a, b| Ok(pick(a, b?)))
    }
}

/// The `n`-th RM point: argmax of `|π_n|` over `count` fresh uniform candidates,
/// ties to the smallest draw index. If every candidate is a node, one retry
/// with fresh substreams is made.
pub fn next_rm_point(
    existing: &[ComplexPoint],
    domain: &CompactDomain,
    count: u64,
    streams: &StreamFactory,
) -> Result<ComplexPoint> {
    let count = count.max(1);
    for purpose in [Purpose::Candidate, Purpose::Retry] {
        let (_, v, z) = rm_argmax(existing, domain, count, streams, purpose)?;
        if v > f64::NEG_INFINITY {
            return Ok(z);
        }
    }
    Err(LejaError::DegenerateDraw { step: existing.len(), count: count as usize })
}

/// One draw from the density `∝ |π_n|` by rejection against the uniform law,
/// with envelope `2·max_grid |π_n|`. The envelope is only an estimate, so the
/// draw is approximate and may fail for large `n`.
pub fn next_rejection_point(
    existing: &[ComplexPoint],
    domain: &CompactDomain,
    bound_grid: &[ComplexPoint],
    streams: &StreamFactory,
    max_attempts: u64,
) -> Result<ComplexPoint> {
    if bound_grid.is_empty() {
        return Err(LejaError::InvalidConfig("rejection bound grid is empty".into()));
    }
    let n = existing.len();
    let bound = std::f64::consts::LN_2 + sup_norm_estimate(existing, bound_grid).0;
    for a in 0..max_attempts {
        let mut s = streams.stream(n, a, Purpose::Rejection);
        let x = domain.sample_uniform(&mut s)?;
        let log_u = s.uniform_positive().ln();
        let lx = log_abs_pi(existing, x);
        if lx > f64::NEG_INFINITY && log_u <= lx - bound {
            return Ok(x);
        }
    }
    Err(LejaError::RejectionBoundFailed { step: n, attempts: max_attempts })
}

fn argmax_excluding_nodes(existing: &[ComplexPoint], points: &[ComplexPoint]) -> Result<ComplexPoint> {
    if points.is_empty() {
        return Err(LejaError::InvalidConfig("empty candidate set".into()));
    }
    let (i, v) = argmax_by(points, |z| log_abs_pi(existing, z));
    if v == f64::NEG_INFINITY {
        return Err(LejaError::DegenerateDraw { step: existing.len(), count: points.len() });
    }
    Ok(points[i])
}

/// Classical discrete Leja step: argmax of `|π_n|` over a fixed grid.
pub fn next_grid_leja_point(existing: &[ComplexPoint], grid: &[ComplexPoint]) -> Result<ComplexPoint> {
    argmax_excluding_nodes(existing, grid)
}

/// Deterministic pseudo-Leja step: argmax of `|π_n|` over a boundary mesh.
pub fn next_mesh_pseudo_leja_point(existing: &[ComplexPoint], mesh: &[ComplexPoint]) -> Result<ComplexPoint> {
    argmax_excluding_nodes(existing, mesh)
}

/// Checks the generic post-conditions of a generated sequence.
pub fn verify_sequence(seq: &NodeSequence) -> Result<()> {
    seq.validate()
}
