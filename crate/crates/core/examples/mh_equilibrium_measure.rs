//! MH points on [-1, 1] approach the arcsine law.
//!
//! Run with `cargo run --release --example mh_equilibrium_measure [n] [seed]`.

use leja::diagnostics::{empirical_measure_test, ReferenceDensity};
use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(300, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let domain = CompactDomain::unit_interval();
    let seq = generate(&domain, &GeneratorConfig::new(Method::Mh, n, seed), None)?;
    let m = empirical_measure_test(&domain, &seq.nodes, 20)?;
    let reference = ReferenceDensity::for_domain(&domain)?;

    println!("{n} MH points, seed {seed}: KS distance to arcsine = {:.4}", m.ks_distance);
    println!("{:>8} {:>9} {:>9}", "bin", "empirical", "arcsine");
    for b in &m.histogram {
        let mid = 0.5 * (b.left + b.right);
        let bar = "#".repeat((b.density * 20.0).round() as usize);
        println!("{mid:>8.3} {:>9.3} {:>9.3}  {bar}", b.density, reference.density(mid));
    }
    Ok(())
}
