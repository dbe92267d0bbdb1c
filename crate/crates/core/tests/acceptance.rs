//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Runs without the libtest harness so the summary lines are always shown.

use std::time::Instant;

use leja::diagnostics::{
    capacity_transfinite, empirical_measure_test, ensemble_stats, geometric_rate, ks_distance,
    pseudo_leja_ratio_series, DEFAULT_RATE_CUTOFF,
};
use leja::domain::{CompactDomain, ComplexPoint};
use leja::functions::TestFunction;
use leja::generators::{generate, next_grid_leja_point, next_mh_point, next_rm_point, rm_candidate, GeneratorConfig};
use leja::interp::{error_trace_named, lebesgue_function, lebesgue_series, newton_interpolate};
use leja::nodes::{write_points_csv, Method, NodeSequence};
use leja::polyeval::{log_abs_pi, pairwise_log_product};
use leja::rng::{Purpose, StreamFactory};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

const SEEDS: u64 = 10;
const LEBESGUE_GRID: usize = 50_000;
const EVAL_GRID: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ensemble(domain: &CompactDomain, method: Method, n: usize) -> Vec<NodeSequence> {
    (0..SEEDS)
        .into_par_iter()
        .map(|s| generate(domain, &GeneratorConfig::new(method, n, s), None).expect("generation succeeds"))
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" ")
}

struct Ensembles {
    interval_mh: Vec<NodeSequence>,
    interval_rm: Vec<NodeSequence>,
    disk_mh: Vec<NodeSequence>,
    disk_rm: Vec<NodeSequence>,
}

fn equilibrium_measure(e: &Ensembles) -> Outcome {
    let d = CompactDomain::unit_interval();
    let ks: Vec<f64> = e.interval_mh.iter().map(|s| empirical_measure_test(&d, &s.nodes, 50).unwrap().ks_distance).collect();
    let good = ks.iter().filter(|&&k| k < 0.08).count();
    outcome(good >= 9, format!("KS < 0.08 in {good}/10 seeds (KS: {})", fmt_list(&ks)))
}

fn interpolation_rate(e: &Ensembles) -> Outcome {
    let d = CompactDomain::unit_interval();
    let rates: Vec<f64> = e.interval_mh[..3]
        .iter()
        .map(|s| {
            let t = error_trace_named(&d, s.prefix(250), TestFunction::RungeComplex, EVAL_GRID).unwrap().error_trace;
            geometric_rate(&t, DEFAULT_RATE_CUTOFF).unwrap()
        })
        .collect();
    let pass = rates.iter().all(|r| (0.88..=0.94).contains(r));
    outcome(pass, format!("rho per seed (n <= 250): {}, target [0.88, 0.94]", fmt_list(&rates)))
}

fn mean_slope(seqs: &[NodeSequence]) -> f64 {
    let grid = seqs[0].domain.eval_grid(LEBESGUE_GRID);
    let series: Vec<Vec<(usize, f64)>> = seqs
        .iter()
        .map(|s| {
            lebesgue_series(s.prefix(200), &grid, 10..=200).unwrap().into_iter().map(|l| (l.n, l.value)).collect()
        })
        .collect();
    ensemble_stats(&series, 10..=200).unwrap().mean_lebesgue_slope
}

fn lebesgue_growth(e: &Ensembles) -> Outcome {
    let i_rm = mean_slope(&e.interval_rm);
    let i_mh = mean_slope(&e.interval_mh);
    let d_rm = mean_slope(&e.disk_rm);
    let d_mh = mean_slope(&e.disk_mh);
    let pass = (0.3..=0.9).contains(&i_rm)
        && (1.0..=2.2).contains(&i_mh)
        && i_mh > i_rm
        && (0.3..=0.8).contains(&d_rm)
        && (2.0..=3.8).contains(&d_mh);
    outcome(
        pass,
        format!("slopes: interval RM {i_rm:.3} MH {i_mh:.3}, disk RM {d_rm:.3} MH {d_mh:.3}"),
    )
}

fn disk_leja_bound() -> Outcome {
    let d = CompactDomain::unit_disk();
    let mut cfg = GeneratorConfig::new(Method::GridLeja, 100, 0);
    cfg.grid_size = 100_000;
    let seq = generate(&d, &cfg, None).unwrap();
    let grid = d.eval_grid(100_000);
    let series = lebesgue_series(&seq.nodes, &grid, 1..=100).unwrap();
    let worst = series.iter().map(|l| l.value / (2.0 * l.n as f64)).fold(0.0, f64::max);
    let last = series.last().unwrap().value;
    outcome(worst <= 1.0, format!("max Lambda_n/(2n) = {worst:.3} over n <= 100, Lambda_100 = {last:.2}"))
}

fn capacities(e: &Ensembles) -> Outcome {
    let interval = CompactDomain::unit_interval();
    let disk = CompactDomain::unit_disk();
    let leja = |d: &CompactDomain| {
        let seq = generate(d, &GeneratorConfig::new(Method::GridLeja, 200, 0), None).unwrap();
        capacity_transfinite(&seq.nodes).unwrap()
    };
    let gi = leja(&interval);
    let gd = leja(&disk);
    let ri = median(e.interval_rm.iter().map(|s| capacity_transfinite(s.prefix(200)).unwrap()).collect());
    let rd = median(e.disk_rm.iter().map(|s| capacity_transfinite(s.prefix(200)).unwrap()).collect());
    let within = |v: f64, target: f64, tol: f64| (v - target).abs() <= tol * target;
    let pass = within(gi, 0.5, 0.10) && within(gd, 1.0, 0.05) && within(ri, 0.5, 0.10) && within(rd, 1.0, 0.10);
    outcome(
        pass,
        format!("grid Leja: interval {gi:.4} disk {gd:.4}; RM median: interval {ri:.4} disk {rd:.4}"),
    )
}

fn pseudo_leja_ratio(e: &Ensembles) -> Outcome {
    let grid = CompactDomain::unit_interval().eval_grid(EVAL_GRID);
    let minima: Vec<f64> = e
        .interval_rm
        .iter()
        .map(|s| {
            pseudo_leja_ratio_series(s.prefix(201), &grid)
                .into_iter()
                .filter(|&(n, _)| (10..=200).contains(&n))
                .map(|(_, r)| r)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let good = minima.iter().filter(|&&m| m >= 0.4).count();
    outcome(good >= 9, format!("min ratio >= 0.4 in {good}/10 seeds (minima: {})", fmt_list(&minima)))
}

fn c(re: f64, im: f64) -> ComplexPoint {
    Complex64::new(re, im)
}

fn random_nodes(rng: &mut Xoshiro256PlusPlus, n: usize) -> Vec<ComplexPoint> {
    (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn lagrange_basis(nodes: &[ComplexPoint], i: usize, z: ComplexPoint) -> ComplexPoint {
    nodes.iter().enumerate().filter(|&(j, _)| j != i).fold(c(1.0, 0.0), |acc, (_, &w)| acc * (z - w) / (nodes[i] - w))
}

/// Each check against a straightforward oracle; returns the failures.
fn oracle_suite() -> Vec<String> {
    let mut fails = Vec::new();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);

    for _ in 0..200 {
        let n = rng.random_range(2..=20);
        let nodes = random_nodes(&mut rng, n);
        let z = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let direct: f64 = (0..n).map(|i| lagrange_basis(&nodes, i, z).norm()).sum();
        let got = lebesgue_function(&nodes, z).unwrap();
        if (got - direct).abs() > 1e-8 * direct {
            fails.push(format!("lebesgue n={n}: {got} vs {direct}"));
        }
    }

    for _ in 0..200 {
        let n = rng.random_range(1..=15);
        let nodes = random_nodes(&mut rng, n);
        let vals: Vec<_> = nodes.iter().map(|&z| TestFunction::Exp.eval(z)).collect();
        let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let lagrange: ComplexPoint = (0..n).map(|i| vals[i] * lagrange_basis(&nodes, i, z)).sum();
        let newton = leja::interp::NewtonInterpolant::from_values(&nodes, &vals).unwrap().eval(z);
        let _ = newton_interpolate(&nodes, &vals).unwrap();
        if (newton - lagrange).norm() > 1e-8 * lagrange.norm().max(1.0) {
            fails.push(format!("newton n={n}: {newton} vs {lagrange}"));
        }
    }

    for _ in 0..200 {
        let n = rng.random_range(1..=30);
        let nodes = random_nodes(&mut rng, n);
        let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let direct = nodes.iter().map(|&w| (z - w).norm()).product::<f64>();
        let got = log_abs_pi(&nodes, z).exp();
        if (got - direct).abs() > 1e-10 * direct {
            fails.push(format!("log product n={n}: {got} vs {direct}"));
        }
    }

    // RM: replay every candidate sequentially and take the first maximum
    let d = CompactDomain::unit_interval();
    for seed in 0..5u64 {
        let streams = StreamFactory::new(seed);
        let existing: Vec<_> = (0..6).map(|k| c(-0.9 + 0.35 * k as f64, 0.0)).collect();
        for count in [1u64, 17, 3000] {
            let got = next_rm_point(&existing, &d, count, &streams).unwrap();
            let mut best = (f64::NEG_INFINITY, c(0.0, 0.0));
            for k in 1..=count {
                let z = rm_candidate(&d, &streams, existing.len(), k, Purpose::Candidate).unwrap();
                let v = log_abs_pi(&existing, z);
                if v > best.0 {
                    best = (v, z);
                }
            }
            if got != best.1 {
                fails.push(format!("rm argmax seed={seed} count={count}"));
            }
        }
    }
    let grid = CompactDomain::unit_disk().eval_grid(6000);
    let existing = [c(0.3, 0.1), c(-0.2, 0.5), c(1.0, 0.0)];
    let got = next_grid_leja_point(&existing, &grid).unwrap();
    let mut best = (f64::NEG_INFINITY, c(0.0, 0.0));
    for &z in &grid {
        let v = log_abs_pi(&existing, z);
        if v > best.0 {
            best = (v, z);
        }
    }
    if got != best.1 {
        fails.push("grid argmax".into());
    }

    for _ in 0..50 {
        let n = rng.random_range(2..=40);
        let nodes = random_nodes(&mut rng, n);
        let mut brute = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                brute += (nodes[i] - nodes[j]).norm().ln();
            }
        }
        let oracle = (2.0 * brute / (n * (n - 1)) as f64).exp();
        let got = capacity_transfinite(&nodes).unwrap();
        if (got - oracle).abs() > 1e-12 * oracle {
            fails.push(format!("transfinite n={n}: {got} vs {oracle}"));
        }
        let _ = pairwise_log_product(&nodes).unwrap();
    }

    // MH marginal for nodes {±0.5}: endpoints of independent 10^4-step chains
    // against the CDF of |x² − 1/4| obtained by Simpson quadrature
    let existing = [c(-0.5, 0.0), c(0.5, 0.0)];
    let ends: Vec<f64> = (0..2000u64)
        .into_par_iter()
        .map(|r| next_mh_point(&existing, &d, 10_000, &StreamFactory::new(1000 + r)).unwrap().re)
        .collect();
    let m = 20_000;
    let h = 2.0 / m as f64;
    let dens = |x: f64| (x * x - 0.25).abs();
    let mut cdf = vec![0.0; m + 1];
    for k in 0..m {
        let a = -1.0 + k as f64 * h;
        cdf[k + 1] = cdf[k] + h / 6.0 * (dens(a) + 4.0 * dens(a + h / 2.0) + dens(a + h));
    }
    let total = cdf[m];
    let quad_cdf = |x: f64| {
        let t = ((x + 1.0) / h).clamp(0.0, m as f64);
        let k = (t.floor() as usize).min(m - 1);
        (cdf[k] + (t - k as f64) * (cdf[k + 1] - cdf[k])) / total
    };
    let ks = ks_distance(&ends, quad_cdf);
    if ks >= 0.05 {
        fails.push(format!("mh marginal KS {ks:.4}"));
    }
    fails
}

fn oracle_equivalence() -> Outcome {
    let fails = oracle_suite();
    let n = fails.len();
    outcome(n == 0, if n == 0 { "all oracle comparisons agree".into() } else { fails.join("; ") })
}

fn csv_bytes(seq: &NodeSequence) -> Vec<u8> {
    let mut buf = Vec::new();
    write_points_csv(&seq.nodes, &mut buf).unwrap();
    buf
}

fn determinism() -> Outcome {
    let mut problems = Vec::new();
    let cases = [
        (CompactDomain::unit_interval(), Method::Rm, 120),
        (CompactDomain::unit_disk(), Method::Mh, 80),
        (CompactDomain::unit_disk(), Method::RejectionRandomLeja, 40),
        (CompactDomain::unit_interval(), Method::GridLeja, 60),
    ];
    for (d, m, n) in &cases {
        let cfg = GeneratorConfig::new(*m, *n, 42);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| csv_bytes(&generate(d, &cfg, None).unwrap()))
        };
        if run(1) != run(8) {
            problems.push(format!("{m} on {}: 1 vs 8 threads differ", d.kind_name()));
        }
        let long = generate(d, &GeneratorConfig::new(*m, n + 1, 42), None).unwrap();
        let short = generate(d, &cfg, None).unwrap();
        if long.nodes[..*n] != short.nodes[..] {
            problems.push(format!("{m} on {}: prefix property broken", d.kind_name()));
        }
    }
    let pass = problems.is_empty();
    outcome(pass, if pass { "byte-identical across threads; prefixes agree".into() } else { problems.join("; ") })
}

fn main() {
    let start = Instant::now();
    let interval = CompactDomain::unit_interval();
    let disk = CompactDomain::unit_disk();
    let e = Ensembles {
        interval_mh: ensemble(&interval, Method::Mh, 300),
        interval_rm: ensemble(&interval, Method::Rm, 201),
        disk_mh: ensemble(&disk, Method::Mh, 200),
        disk_rm: ensemble(&disk, Method::Rm, 200),
    };
    println!("ensembles generated in {:.1}s", start.elapsed().as_secs_f64());

    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: [Criterion; 8] = [
        ("equilibrium measure recovery", Box::new(|| equilibrium_measure(&e))),
        ("geometric interpolation rate", Box::new(|| interpolation_rate(&e))),
        ("Lebesgue growth ordering", Box::new(|| lebesgue_growth(&e))),
        ("disk Leja Lebesgue bound", Box::new(disk_leja_bound)),
        ("capacity estimates", Box::new(|| capacities(&e))),
        ("pseudo-Leja ratio of RM points", Box::new(|| pseudo_leja_ratio(&e))),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("determinism and hierarchy", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({}) [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/8 passed in {:.1}s", 8 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
