//! Domains from JSON, with and without exponent overrides, and the two
//! deterministic baselines next to a rejection-sampled sequence.

use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::interp::lebesgue_series_on_domain;
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let specs = [
        r#"{"kind": "circle", "center": [0.5, -0.5], "radius": 2.0}"#,
        r#"{"kind": "disk", "center": [0, 0], "radius": 1, "exponents": {"r_nikolskii": 2, "r_markov": 1, "r_covering": 2}}"#,
        r#"{"kind": "interval-union", "intervals": [[-1, -0.3], [0.2, 1]]}"#,
        r#"{"kind": "polygon", "vertices": [[0, 0], [1, 0], [0.5, 0.8]]}"#,
    ];
    for spec in specs {
        let domain: CompactDomain = serde_json::from_str(spec)?;
        println!("{} (diameter {:.3}, exponents {:?})", domain.kind_name(), domain.diameter(), domain.exponents());
        for method in [Method::GridLeja, Method::MeshPseudoLeja, Method::RejectionRandomLeja] {
            let mut cfg = GeneratorConfig::new(method, 40, 9);
            cfg.grid_size = 4000;
            match generate(&domain, &cfg, None) {
                Ok(seq) => {
                    let l = lebesgue_series_on_domain(&domain, &seq.nodes, 8000, 40..=40)?;
                    println!("  {:>22}: Lambda_40 = {:.2}", method.name(), l[0].value);
                }
                Err(e) => println!("  {:>22}: {e}", method.name()),
            }
        }
    }
    Ok(())
}
