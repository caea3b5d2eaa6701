//! The four mode × task cells over many paired trials.
//!
//! `cargo run --release --example benchmark [n_trials] [master_seed]`

use molres::benchmark::run_benchmark;
use molres::config::ExperimentConfig;

fn main() -> molres::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100, |s| s.parse().expect("n_trials"));
    let cfg = ExperimentConfig {
        master_seed: args.next().map_or(1, |s| s.parse().expect("master_seed")),
        ..ExperimentConfig::default()
    };
    let stats = run_benchmark(&cfg, n)?;
    println!("{:<22} {:>4} {:>8} {:>8} {:>8}", "mode", "task", "train", "test", "std");
    for c in &stats.cells {
        println!("{:<22} {:>4} {:>8.4} {:>8.4} {:>8.4}", c.mode, c.task, c.mean_train, c.mean, c.std);
    }
    let worst = stats.trials.iter().map(|t| t.untrained_rmse_ratio).fold(f64::INFINITY, f64::min);
    println!("untrained / trained test RMSE >= {worst:.3e}");
    Ok(())
}
