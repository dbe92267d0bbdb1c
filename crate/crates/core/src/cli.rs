//! Experiment runs driven by a JSON [`RunConfig`], writing CSV and JSON files.
//!
//! The `leja` binary is a thin argument parser over the `cmd_*` functions here.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    empirical_histogram, empirical_measure_test, ensemble_stats_from_reports, geometric_rate, loglog_slope,
    write_histogram_csv, EnsembleStats, QualityReport, ReportSettings, DEFAULT_RATE_CUTOFF,
};
use crate::domain::{CompactDomain, ComplexPoint};
use crate::error::{LejaError, Result};
use crate::functions::TestFunction;
use crate::generators::{
    generate, GeneratorConfig, DEFAULT_EPSILON, DEFAULT_GRID_SIZE, DEFAULT_MAX_ATTEMPTS, DEFAULT_MESH_MULTIPLIER,
};
use crate::interp::{error_trace_named, lebesgue_series};
use crate::nodes::{read_points_csv, write_points_csv, write_series_csv, Method, NodeSequence};

const MIN_GRID: usize = 16;
const CHECKPOINT_EVERY: usize = 100;

fn default_domain() -> CompactDomain {
    CompactDomain::unit_interval()
}
fn default_method() -> Method {
    Method::Mh
}
fn default_n() -> usize {
    200
}
fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}
fn default_grid() -> usize {
    DEFAULT_GRID_SIZE
}
fn default_lebesgue_grid() -> usize {
    50_000
}
fn default_function() -> TestFunction {
    TestFunction::RungeComplex
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_one() -> usize {
    1
}
fn default_range() -> [usize; 2] {
    [10, 200]
}
fn default_bins() -> usize {
    50
}
fn default_mesh_multiplier() -> f64 {
    DEFAULT_MESH_MULTIPLIER
}
fn default_max_attempts() -> u64 {
    DEFAULT_MAX_ATTEMPTS
}

/// Everything needed to reproduce a run. Every field has a default, so `{}`
/// is a valid config (200 MH points on `[−1, 1]`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_domain")]
    pub domain: CompactDomain,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "default_n")]
    pub n_target: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_override: Option<f64>,
    /// Base seed; an ensemble uses `seed, seed + 1, …` unless `seeds` is given.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    /// Grid for grid Leja and the rejection bound.
    #[serde(default = "default_grid")]
    pub generation_grid: usize,
    /// Grid for error traces, sup norms and quality ratios.
    #[serde(default = "default_grid")]
    pub eval_grid: usize,
    #[serde(default = "default_lebesgue_grid")]
    pub lebesgue_grid: usize,
    #[serde(default = "default_function")]
    pub function: TestFunction,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default = "default_one")]
    pub ensemble: usize,
    /// Inclusive `n` range of the Lebesgue and separation fits.
    #[serde(default = "default_range")]
    pub lebesgue_range: [usize; 2],
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default = "default_mesh_multiplier")]
    pub mesh_multiplier: f64,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leja_start: Option<[f64; 2]>,
    /// Worker threads; all cores when absent. Never changes outputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| LejaError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| LejaError::InvalidConfig(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, g) in [
            ("generation_grid", self.generation_grid),
            ("eval_grid", self.eval_grid),
            ("lebesgue_grid", self.lebesgue_grid),
        ] {
            if g < MIN_GRID {
                return Err(LejaError::InvalidConfig(format!("{name} must be at least {MIN_GRID}, got {g}")));
            }
        }
        if self.ensemble < 1 {
            return Err(LejaError::InvalidConfig("ensemble must be at least 1".into()));
        }
        if let Some(s) = &self.seeds {
            if s.is_empty() {
                return Err(LejaError::InvalidConfig("seeds must not be empty".into()));
            }
        }
        if self.lebesgue_range[0] < 1 || self.lebesgue_range[0] > self.lebesgue_range[1] {
            return Err(LejaError::InvalidConfig(format!("bad lebesgue_range {:?}", self.lebesgue_range)));
        }
        if self.histogram_bins < 1 {
            return Err(LejaError::InvalidConfig("histogram_bins must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(LejaError::InvalidConfig("threads must be at least 1".into()));
        }
        self.generator(self.seed).validate()
    }

    pub fn generator(&self, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            method: self.method,
            n_target: self.n_target,
            epsilon: self.epsilon,
            seed,
            grid_size: self.generation_grid,
            alpha_override: self.alpha_override,
            mesh_multiplier: self.mesh_multiplier,
            max_attempts: self.max_attempts,
            leja_start: self.leja_start,
        }
    }

    /// Seeds of the ensemble, in output order.
    pub fn seed_list(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.ensemble as u64).map(|k| self.seed.wrapping_add(k)).collect(),
        }
    }

    fn report_settings(&self) -> ReportSettings {
        ReportSettings {
            eval_grid: self.eval_grid,
            lebesgue_grid: self.lebesgue_grid,
            lebesgue_range: (self.lebesgue_range[0], self.lebesgue_range[1]),
            function: self.function.check_domain(&self.domain).is_ok().then_some(self.function),
            rate_cutoff: DEFAULT_RATE_CUTOFF,
        }
    }
}

/// Process exit code for an error: 2 for usage and configuration problems,
/// 1 for failures during the run.
pub fn exit_code(err: &LejaError) -> i32 {
    match err {
        LejaError::InvalidConfig(_)
        | LejaError::InvalidDomain(_)
        | LejaError::Parse(_)
        | LejaError::Json(_)
        | LejaError::Unsupported { .. }
        | LejaError::NonFiniteFunction { .. } => 2,
        _ => 1,
    }
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| LejaError::InvalidConfig(format!("output directory {} is not writable: {e}", dir.display())))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Reads a points CSV and checks it against the configured domain.
pub fn load_points(path: &Path, domain: &CompactDomain) -> Result<Vec<ComplexPoint>> {
    let file = File::open(path)
        .map_err(|e| LejaError::InvalidConfig(format!("cannot read points file {}: {e}", path.display())))?;
    let nodes = read_points_csv(file)?;
    if nodes.is_empty() {
        return Err(LejaError::InvalidConfig(format!("points file {} has no rows", path.display())));
    }
    if let Some(i) = nodes.iter().position(|&z| !domain.contains(z)) {
        return Err(LejaError::InvalidConfig(format!("point {i} = {} lies outside the configured domain", nodes[i])));
    }
    crate::nodes::check_distinct(&nodes)?;
    Ok(nodes)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepCount {
    pub n: usize,
    pub candidates: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub nodes: usize,
    pub seconds: f64,
}

/// Contents of `meta.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenerateMeta {
    pub config: RunConfig,
    pub method: Method,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub node_count: usize,
    /// `N_n` for `n = 1..=n_target`.
    pub step_counts: Vec<StepCount>,
    pub checkpoints: Vec<Checkpoint>,
    pub total_seconds: f64,
}

/// Generates one sequence and writes `points.csv` and `meta.json`.
pub fn cmd_generate(cfg: &RunConfig) -> Result<GenerateMeta> {
    cfg.validate()?;
    prepare_out(&cfg.out_dir)?;
    let gen = cfg.generator(cfg.seed);
    let start = Instant::now();
    let mut checkpoints = Vec::new();
    let mut sink = |p: crate::generators::Progress| {
        let count = p.n + 1;
        if count.is_multiple_of(CHECKPOINT_EVERY) {
            checkpoints.push(Checkpoint { nodes: count, seconds: p.elapsed.as_secs_f64() });
        }
    };
    let seq = generate(&cfg.domain, &gen, Some(&mut sink))?;
    let total = start.elapsed().as_secs_f64();
    write_points_csv(&seq.nodes, create(&cfg.out_dir, "points.csv")?)?;

    let meta = GenerateMeta {
        config: cfg.clone(),
        method: cfg.method,
        seed: seq.seed,
        alpha: gen.alpha(&cfg.domain),
        node_count: seq.len(),
        step_counts: (1..=cfg.n_target)
            .filter_map(|n| gen.candidates_at(&cfg.domain, n).map(|c| StepCount { n, candidates: c }))
            .collect(),
        checkpoints,
        total_seconds: total,
    };
    serde_json::to_writer_pretty(create(&cfg.out_dir, "meta.json")?, &meta)?;
    Ok(meta)
}

#[derive(Clone, Debug)]
pub struct InterpolateSummary {
    pub trace: Vec<(usize, f64)>,
    pub rate: Option<f64>,
}

/// Error trace of the configured function on `points`; writes `error_trace.csv`.
pub fn cmd_interpolate(cfg: &RunConfig, points: &Path) -> Result<InterpolateSummary> {
    cfg.validate()?;
    cfg.function.check_domain(&cfg.domain)?;
    let nodes = load_points(points, &cfg.domain)?;
    prepare_out(&cfg.out_dir)?;
    let trace = error_trace_named(&cfg.domain, &nodes, cfg.function, cfg.eval_grid)?.error_trace;
    write_series_csv(&trace, create(&cfg.out_dir, "error_trace.csv")?)?;
    let rate = geometric_rate(&trace, DEFAULT_RATE_CUTOFF).ok();
    Ok(InterpolateSummary { trace, rate })
}

#[derive(Clone, Debug)]
pub struct LebesgueSummary {
    pub series: Vec<(usize, f64)>,
    /// Log-log slope over the configured range, if it holds at least 3 points.
    pub slope: Option<f64>,
}

/// Lebesgue constants of every prefix of `points`; writes `lebesgue.csv`.
pub fn cmd_lebesgue(cfg: &RunConfig, points: &Path) -> Result<LebesgueSummary> {
    cfg.validate()?;
    let nodes = load_points(points, &cfg.domain)?;
    prepare_out(&cfg.out_dir)?;
    let grid = cfg.domain.eval_grid(cfg.lebesgue_grid);
    let series: Vec<(usize, f64)> =
        lebesgue_series(&nodes, &grid, 1..=nodes.len())?.into_iter().map(|e| (e.n, e.value)).collect();
    write_series_csv(&series, create(&cfg.out_dir, "lebesgue.csv")?)?;
    let slope = loglog_slope(&series, cfg.lebesgue_range[0], cfg.lebesgue_range[1]).ok().map(|f| f.slope);
    Ok(LebesgueSummary { series, slope })
}

/// One ensemble member in `report.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedBlock {
    pub seed: u64,
    pub status: SeedStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<QualityReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedStatus {
    Ok,
    Failed,
}

/// Contents of `report.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub config: RunConfig,
    pub seeds: Vec<SeedBlock>,
    /// Present when at least two seeds succeeded.
    pub ensemble: Option<EnsembleStats>,
}

impl EnsembleReport {
    pub fn succeeded(&self) -> usize {
        self.seeds.iter().filter(|s| s.status == SeedStatus::Ok).count()
    }
}

fn run_seed(cfg: &RunConfig, settings: &ReportSettings, seed: u64) -> Result<(NodeSequence, QualityReport, f64)> {
    let start = Instant::now();
    let seq = generate(&cfg.domain, &cfg.generator(seed), None)?;
    let report = QualityReport::compute(&seq, settings)?;
    Ok((seq, report, start.elapsed().as_secs_f64()))
}

/// Generation and diagnostics for every seed, in parallel. Writes
/// `report.json` and a pooled `histogram.csv`. Fails only if no seed succeeds.
pub fn cmd_report(cfg: &RunConfig) -> Result<EnsembleReport> {
    cfg.validate()?;
    prepare_out(&cfg.out_dir)?;
    let settings = cfg.report_settings();
    let seeds = cfg.seed_list();
    let outcomes: Vec<_> = seeds.par_iter().map(|&s| run_seed(cfg, &settings, s)).collect();

    let mut blocks = Vec::with_capacity(seeds.len());
    let mut pooled = Vec::new();
    let mut reports = Vec::new();
    let mut last_err = None;
    for (&seed, outcome) in seeds.iter().zip(outcomes) {
        match outcome {
            Ok((seq, report, seconds)) => {
                let ks = empirical_measure_test(&cfg.domain, &seq.nodes, cfg.histogram_bins).ok().map(|m| m.ks_distance);
                pooled.extend_from_slice(&seq.nodes);
                blocks.push(SeedBlock {
                    seed,
                    status: SeedStatus::Ok,
                    error: None,
                    ks_distance: ks,
                    seconds: Some(seconds),
                    report: Some(report.clone()),
                });
                reports.push(report);
            }
            Err(e) => {
                blocks.push(SeedBlock {
                    seed,
                    status: SeedStatus::Failed,
                    error: Some(e.to_string()),
                    ks_distance: None,
                    seconds: None,
                    report: None,
                });
                last_err = Some(e);
            }
        }
    }
    if reports.is_empty() {
        return Err(last_err.expect("at least one seed ran"));
    }
    let range = cfg.lebesgue_range[0]..=cfg.lebesgue_range[1].min(cfg.n_target);
    let ensemble = (reports.len() >= 2).then(|| ensemble_stats_from_reports(&reports, range).ok()).flatten();
    let out = EnsembleReport { config: cfg.clone(), seeds: blocks, ensemble };
    serde_json::to_writer_pretty(create(&cfg.out_dir, "report.json")?, &out)?;
    write_histogram_csv(
        &empirical_histogram(&cfg.domain, &pooled, cfg.histogram_bins),
        create(&cfg.out_dir, "histogram.csv")?,
    )?;
    Ok(out)
}
