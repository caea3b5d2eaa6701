//! Test NRMSE as a function of the input hold time τ.

use molres::benchmark::run_benchmark;
use molres::cli::with_key;
use molres::config::ExperimentConfig;

fn main() -> molres::Result<()> {
    let base = ExperimentConfig { n_trials: 20, ..ExperimentConfig::default() };
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "tau", "P/A", "P/B", "PS/A", "PS/B");
    for tau in ["25", "50", "100", "200", "400"] {
        let cfg = with_key(&base, "tau", tau)?;
        let stats = run_benchmark(&cfg, cfg.n_trials)?;
        let means: Vec<String> = stats.cells.iter().map(|c| format!("{:>10.4}", c.mean)).collect();
        println!("{tau:>6} {}", means.join(" "));
    }
    Ok(())
}
