//! Average Lebesgue constants of RM and MH points, with log-log slopes.
//!
//! Run with `cargo run --release --example lebesgue_growth [interval|disk] [seeds] [n]`.

use leja::diagnostics::ensemble_stats;
use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::interp::lebesgue_series;
use leja::nodes::Method;
use rayon::prelude::*;

fn main() -> leja::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let domain = match args.next().as_deref().unwrap_or("interval") {
        "disk" => CompactDomain::unit_disk(),
        _ => CompactDomain::unit_interval(),
    };
    let seeds: u64 = args.next().map_or(5, |s| s.parse().expect("seeds"));
    let n: usize = args.next().map_or(120, |s| s.parse().expect("n"));
    let grid = domain.eval_grid(20_000);

    for method in [Method::Rm, Method::Mh] {
        let series = (0..seeds)
            .into_par_iter()
            .map(|s| {
                let seq = generate(&domain, &GeneratorConfig::new(method, n, s), None)?;
                Ok(lebesgue_series(&seq.nodes, &grid, 10..=n)?.into_iter().map(|l| (l.n, l.value)).collect())
            })
            .collect::<leja::error::Result<Vec<Vec<(usize, f64)>>>>()?;
        let stats = ensemble_stats(&series, 10..=n)?;
        let last = stats.per_n_mean.len() - 1;
        println!(
            "{:>3} on {}: mean Lambda_{n} = {:.1} (sd {:.1}), slope of mean {:.2}, slope of sd {}",
            method.name(),
            domain.kind_name(),
            stats.per_n_mean[last],
            stats.per_n_sd[last],
            stats.mean_lebesgue_slope,
            stats.sd_lebesgue_slope.map_or("n/a".into(), |s| format!("{s:.2}")),
        );
    }
    Ok(())
}
