//! The `report` pipeline driven from code: a small RM ensemble on the disk,
//! written as report.json and histogram.csv under the temp directory.

use leja::cli::{cmd_report, RunConfig};

fn main() -> leja::error::Result<()> {
    let mut cfg = RunConfig::from_json(
        r#"{
            "domain": {"kind": "disk", "center": [0, 0], "radius": 1},
            "method": "rm",
            "n_target": 80,
            "ensemble": 4,
            "seed": 100,
            "function": "exp",
            "eval_grid": 4000,
            "lebesgue_grid": 8000,
            "lebesgue_range": [10, 80]
        }"#,
    )?;
    cfg.out_dir = std::env::temp_dir().join("leja_ensemble_report");
    let report = cmd_report(&cfg)?;
    for s in &report.seeds {
        let r = s.report.as_ref().expect("all seeds succeed here");
        println!(
            "seed {}: KS to uniform angle {:.3}, Lebesgue slope {:.2}, exp error rate {:.3}",
            s.seed,
            s.ks_distance.unwrap(),
            r.fitted.lebesgue_slope.unwrap(),
            r.fitted.geometric_rate.unwrap_or(f64::NAN)
        );
    }
    if let Some(e) = &report.ensemble {
        println!("ensemble of {}: slope of mean Lambda_n {:.2}", e.draws, e.mean_lebesgue_slope);
    }
    println!("outputs in {}", cfg.out_dir.display());
    Ok(())
}
