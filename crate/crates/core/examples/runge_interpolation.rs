//! Geometric convergence of Newton interpolation at random Leja-type points
//! for f(z) = 1/(z² + 0.01) on [-1, 1].
//!
//! Run with `cargo run --release --example runge_interpolation [mh|rm] [n]`.

use leja::diagnostics::{geometric_rate, DEFAULT_RATE_CUTOFF};
use leja::domain::CompactDomain;
use leja::functions::TestFunction;
use leja::generators::{generate, GeneratorConfig};
use leja::interp::error_trace_named;
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let method: Method = args.next().as_deref().unwrap_or("mh").parse()?;
    let n: usize = args.next().map_or(250, |s| s.parse().expect("n"));

    let domain = CompactDomain::unit_interval();
    let seq = generate(&domain, &GeneratorConfig::new(method, n, 1), None)?;
    let trace = error_trace_named(&domain, &seq.nodes, TestFunction::RungeComplex, 10_000)?.error_trace;
    for &(k, e) in trace.iter().filter(|(k, _)| k % 25 == 0) {
        println!("n = {k:>4}   max error {e:.3e}");
    }
    let rho = geometric_rate(&trace, DEFAULT_RATE_CUTOFF)?;
    // the poles ±0.1i lie on the level curve of the Green function with this factor
    let a: f64 = 0.1;
    let theory = 1.0 / (a + (1.0 + a * a).sqrt());
    println!("fitted rate {rho:.4}, level-curve rate {theory:.4}");
    Ok(())
}
