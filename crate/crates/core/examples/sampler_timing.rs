//! Wall-clock cost of MH and RM points, reported through the progress hook.
//!
//! Both use N_n = floor(n^2.01) candidates on [-1, 1]; RM scores candidates in
//! parallel, each MH chain is sequential.

use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig, Progress};
use leja::nodes::Method;

fn main() -> leja::error::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(200, |s| s.parse().expect("n"));
    let domain = CompactDomain::unit_interval();
    for method in [Method::Mh, Method::Rm, Method::RejectionRandomLeja] {
        let mut marks = Vec::new();
        let mut hook = |p: Progress| {
            if (p.n + 1).is_multiple_of(50) {
                marks.push(format!("{}:{:.2}s", p.n + 1, p.elapsed.as_secs_f64()));
            }
        };
        generate(&domain, &GeneratorConfig::new(method, n, 0), Some(&mut hook))?;
        println!("{:>22}  {}", method.name(), marks.join("  "));
    }
    Ok(())
}
