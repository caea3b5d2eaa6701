//! Trains a linear readout on one trial and prints the weights as JSON.
//!
//! `cargo run --example readout_training [seed]`

use molres::benchmark::simulate_trial;
use molres::config::ExperimentConfig;
use molres::rc::{harvest, predict, train_readout, ReadoutMode, ReadoutRecord};
use molres::tasks::{nrmse, TaskKind};

fn main() -> molres::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(1, |s| s.parse().expect("seed"));
    let cfg = ExperimentConfig::default();
    let run = simulate_trial(&cfg, seed)?;
    let task = cfg.task_spec(TaskKind::B);
    let (a, b) = cfg.train_window();
    let (c, d) = cfg.test_window();

    for mode in ReadoutMode::ALL {
        let fit_window = |from, to| -> molres::Result<_> {
            let x = harvest(&run.trace, mode, from, to, cfg.stride)?;
            let keep: Vec<bool> = x.times.iter().map(|&t| task.target(&run.input, t).is_some()).collect();
            let x = x.select(&keep);
            let y: Vec<f64> = x.times.iter().map(|&t| task.target(&run.input, t).unwrap()).collect();
            Ok((x, y))
        };
        let (x_train, y_train) = fit_window(a, b)?;
        let (x_test, y_test) = fit_window(c, d)?;
        let fit = train_readout(&x_train, &y_train, cfg.train_options())?;
        let train = nrmse(&y_train, &predict(&fit.weights, &x_train)?, cfg.normalize_by)?;
        let test = nrmse(&y_test, &predict(&fit.weights, &x_test)?, cfg.normalize_by)?;
        println!("{mode}: rank {} train NRMSE {train:.4} test NRMSE {test:.4}", fit.rank);
        let record = ReadoutRecord::new(&fit.weights, mode, cfg.ridge);
        println!("{}", serde_json::to_string(&record)?);
    }
    Ok(())
}
