//! Two capacity estimates along growing prefixes of grid Leja and RM points.

use leja::diagnostics::{capacity_supnorm, capacity_transfinite};
use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let cases = [
        ("[-1, 1]", CompactDomain::unit_interval(), 0.5),
        ("unit disk", CompactDomain::unit_disk(), 1.0),
        ("diagonal segment", serde_json::from_str(r#"{"kind": "segment", "a": [-1, -1], "b": [1, 1]}"#)?, 2f64.sqrt() / 2.0),
    ];
    for (name, domain, cap) in cases {
        let grid = domain.eval_grid(10_000);
        println!("{name} (capacity {cap:.4})");
        for method in [Method::GridLeja, Method::Rm] {
            let seq = generate(&domain, &GeneratorConfig::new(method, 160, 7), None)?;
            for n in [20, 40, 80, 160] {
                let p = seq.prefix(n);
                println!(
                    "  {:>9} n = {n:>3}: transfinite {:.4}  sup-norm {:.4}",
                    method.name(),
                    capacity_transfinite(p)?,
                    capacity_supnorm(p, &grid)?
                );
            }
        }
    }
    Ok(())
}
