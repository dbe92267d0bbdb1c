//! How close each RM point comes to maximizing |pi_n|, and how the points
//! separate, compared with points from a fixed boundary mesh.

use leja::diagnostics::{loglog_slope, lower_envelope, pseudo_leja_ratio_series, separation_series};
use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let domain = CompactDomain::unit_interval();
    let grid = domain.eval_grid(20_000);
    for method in [Method::Rm, Method::MeshPseudoLeja, Method::Mh] {
        let seq = generate(&domain, &GeneratorConfig::new(method, 151, 2), None)?;
        let ratios = pseudo_leja_ratio_series(&seq.nodes, &grid);
        let late: Vec<f64> = ratios.iter().filter(|r| r.0 >= 10).map(|r| r.1).collect();
        let min = late.iter().cloned().fold(f64::INFINITY, f64::min);
        let mean = late.iter().sum::<f64>() / late.len() as f64;
        let sep = loglog_slope(&lower_envelope(&separation_series(&seq.nodes)), 10, 150)?;
        println!(
            "{:>16}: ratio min {min:.3} mean {mean:.3}; separation envelope ~ n^{:.2}",
            method.name(),
            sep.slope
        );
    }
    Ok(())
}
