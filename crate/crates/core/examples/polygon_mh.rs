//! MH points on an L-shaped polygon, written to CSV for plotting.
//!
//! RM points need about n^4 candidates per step on polygons, MH points about
//! n^2, which is what makes MH the practical choice here.

use std::fs::File;

use leja::diagnostics::{empirical_histogram, separation_series};
use leja::domain::CompactDomain;
use leja::generators::{generate, GeneratorConfig};
use leja::nodes::{write_points_csv, Method};

fn main() -> leja::error::Result<()> {
    let l_shape = CompactDomain::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])?;
    let cfg = GeneratorConfig::new(Method::Mh, 120, 3);
    println!("alpha = {:.2}, N_120 = {}", cfg.alpha(&l_shape).unwrap(), cfg.candidates_at(&l_shape, 120).unwrap());
    let seq = generate(&l_shape, &cfg, None)?;

    let path = std::env::temp_dir().join("l_shape_mh.csv");
    write_points_csv(&seq.nodes, File::create(&path)?)?;
    println!("wrote {}", path.display());

    // no closed-form equilibrium measure here, so only the angular histogram
    println!("angle about the centroid:");
    for b in empirical_histogram(&l_shape, &seq.nodes, 12) {
        println!("  [{:5.2}, {:5.2})  {}", b.left, b.right, "#".repeat((b.density * 40.0).round() as usize));
    }
    let sep = separation_series(&seq.nodes);
    println!("smallest gap to earlier nodes at n = 119: {:.2e}", sep.last().unwrap().1);
    Ok(())
}
