use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leja::cli::{cmd_generate, cmd_interpolate, cmd_lebesgue, cmd_report, exit_code, RunConfig, SeedStatus};
use leja::error::{LejaError, Result};

#[derive(Parser)]
#[command(name = "leja", version, about = "Random Leja-type interpolation nodes and their diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a node sequence: points.csv and meta.json
    Generate(Common),
    /// Interpolation error trace of the configured function: error_trace.csv
    Interpolate(WithPoints),
    /// Lebesgue constants of every prefix: lebesgue.csv
    Lebesgue(WithPoints),
    /// Generation plus diagnostics for an ensemble of seeds: report.json, histogram.csv
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; defaults apply to missing fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the seed (and any seed list) of the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct WithPoints {
    #[command(flatten)]
    common: Common,
    /// Node CSV with header index,re,im
    #[arg(long)]
    points: PathBuf,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
            cfg.seeds = None;
        }
        if let Some(o) = &self.out {
            cfg.out_dir = o.clone();
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        b = b.num_threads(k);
    }
    let pool = b.build().map_err(|e| LejaError::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(c) => {
            let cfg = c.resolve()?;
            let meta = in_pool(cfg.threads, || cmd_generate(&cfg))?;
            println!(
                "wrote {} {} nodes to {} in {:.2}s",
                meta.node_count,
                meta.method,
                cfg.out_dir.join("points.csv").display(),
                meta.total_seconds
            );
        }
        Command::Interpolate(w) => {
            let cfg = w.common.resolve()?;
            let s = in_pool(cfg.threads, || cmd_interpolate(&cfg, &w.points))?;
            let last = s.trace.last().map_or(f64::NAN, |t| t.1);
            match s.rate {
                Some(r) => println!("geometric rate {r:.4}; final error {last:.3e}"),
                None => println!("geometric rate unavailable; final error {last:.3e}"),
            }
        }
        Command::Lebesgue(w) => {
            let cfg = w.common.resolve()?;
            let s = in_pool(cfg.threads, || cmd_lebesgue(&cfg, &w.points))?;
            let [lo, hi] = cfg.lebesgue_range;
            match s.slope {
                Some(p) => println!("log-log slope over n in {lo}..={hi}: {p:.4}"),
                None => println!("too few points in {lo}..={hi} for a slope"),
            }
        }
        Command::Report(c) => {
            let cfg = c.resolve()?;
            let r = in_pool(cfg.threads, || cmd_report(&cfg))?;
            for s in r.seeds.iter().filter(|s| s.status == SeedStatus::Failed) {
                eprintln!("seed {} failed: {}", s.seed, s.error.as_deref().unwrap_or(""));
            }
            println!("{}/{} seeds succeeded", r.succeeded(), r.seeds.len());
            if let Some(e) = &r.ensemble {
                println!("mean Lebesgue slope {:.4}", e.mean_lebesgue_slope);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
