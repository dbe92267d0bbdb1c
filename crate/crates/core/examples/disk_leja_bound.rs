//! Discrete Leja points on the unit disk and the bound Lambda_n <= 2n.
//!
//! Starting from z = 1 the greedy choice lands on the boundary circle, so the
//! points coincide with the classical Leja sequence of the circle.

use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::interp::lebesgue_series;
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let disk = CompactDomain::unit_disk();
    let mut cfg = GeneratorConfig::new(Method::GridLeja, 64, 0);
    cfg.grid_size = 40_000;
    cfg.leja_start = Some([1.0, 0.0]);
    let seq = generate(&disk, &cfg, None)?;

    let on_circle = seq.nodes.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12);
    println!("all nodes on the unit circle: {on_circle}");
    for (k, z) in seq.nodes.iter().take(8).enumerate() {
        println!("z_{k} = {:+.4} {:+.4}i", z.re, z.im);
    }
    let series = lebesgue_series(&seq.nodes, &disk.eval_grid(40_000), 1..=64)?;
    for l in series.iter().filter(|l| l.n.is_power_of_two() || l.n % 10 == 0) {
        println!("n = {:>3}  Lambda = {:>7.3}  2n = {:>4}", l.n, l.value, 2 * l.n);
    }
    Ok(())
}
