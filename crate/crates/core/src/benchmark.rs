//! Trial protocol and the multi-trial benchmark.
//!
//! A trial integrates the reactor once under a seeded random influx, then
//! trains and scores a readout for each requested (mode, task) cell on that
//! same trace, so cells within a trial are paired.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::rc::input::READOUT_STREAM;
use crate::rc::{generate_input, harvest, predict, stream_rng, train_readout, trial_seed, DesignMatrix};
use crate::rc::{ReadoutMode, ReadoutWeights};
use crate::reactor::{integrate, ChemState, ChemTrace, InfluxProfile};
use crate::tasks::{nrmse, rmse, TaskKind, TaskSpec};

/// Input signal and trajectory of one trial.
#[derive(Debug, Clone)]
pub struct TrialRun {
    pub seed: u64,
    pub input: InfluxProfile,
    pub trace: ChemTrace,
}

pub fn simulate_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialRun> {
    config.validate()?;
    let input = generate_input(seed, config.influx_base, config.tau, config.settle_s, config.t_end())?;
    let trace = integrate(&config.initial, &config.reactor, &input, config.t_end(), config.step())?;
    Ok(TrialRun { seed, input, trace })
}

/// Score of one readout on one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    pub weights: ReadoutWeights,
    pub full_rank: bool,
    pub nrmse_train: f64,
    pub nrmse_test: f64,
    /// Test RMSE of random normal(0,1) weights over the trained test RMSE.
    pub untrained_rmse_ratio: f64,
    pub n_train: usize,
    pub n_test: usize,
    /// Harvested samples dropped for an undefined target.
    pub excluded_train: usize,
    pub excluded_test: usize,
}

fn with_targets<F>(design: DesignMatrix, rows: &[ChemState], target: &F) -> (DesignMatrix, Vec<f64>, usize)
where
    F: Fn(f64, &ChemState) -> Option<f64>,
{
    let ys: Vec<Option<f64>> = design.times.iter().zip(rows).map(|(&t, s)| target(t, s)).collect();
    let keep: Vec<bool> = ys.iter().map(Option::is_some).collect();
    let excluded = keep.iter().filter(|k| !**k).count();
    let y = ys.into_iter().flatten().collect();
    (design.select(&keep), y, excluded)
}

fn rows_for<'a>(trace: &'a ChemTrace, d: &DesignMatrix) -> Vec<&'a ChemState> {
    d.times.iter().map(|&t| &trace.rows[trace.index_of(t).expect("harvested time")]).collect()
}

/// Trains on the training window and scores both windows against `target(t, state)`.
pub fn evaluate_cell<F>(run: &TrialRun, config: &ExperimentConfig, mode: ReadoutMode, target: F) -> Result<CellOutcome>
where
    F: Fn(f64, &ChemState) -> Option<f64>,
{
    let (a, b) = config.train_window();
    let (c, d) = config.test_window();
    let train = harvest(&run.trace, mode, a, b, config.stride)?;
    let test = harvest(&run.trace, mode, c, d, config.stride)?;
    let train_rows: Vec<ChemState> = rows_for(&run.trace, &train).into_iter().copied().collect();
    let test_rows: Vec<ChemState> = rows_for(&run.trace, &test).into_iter().copied().collect();
    let (train, y_train, excluded_train) = with_targets(train, &train_rows, &target);
    let (test, y_test, excluded_test) = with_targets(test, &test_rows, &target);
    if train.rows() == 0 {
        return Err(Error::EmptyWindow { from: a, to: b });
    }
    if test.rows() == 0 {
        return Err(Error::EmptyWindow { from: c, to: d });
    }

    let fit = train_readout(&train, &y_train, config.train_options())?;
    let out_train = predict(&fit.weights, &train)?;
    let out_test = predict(&fit.weights, &test)?;
    let nrmse_train = nrmse(&y_train, &out_train, config.normalize_by)?;
    let nrmse_test = nrmse(&y_test, &out_test, config.normalize_by)?;

    let mut rng = stream_rng(run.seed, READOUT_STREAM);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let untrained = ReadoutWeights { w: (0..mode.channels()).map(|_| draw()).collect(), w_b: draw() };
    let out_untrained = predict(&untrained, &test)?;
    let untrained_rmse_ratio = rmse(&out_untrained, &y_test) / rmse(&out_test, &y_test);

    Ok(CellOutcome {
        weights: fit.weights,
        full_rank: fit.full_rank,
        nrmse_train,
        nrmse_test,
        untrained_rmse_ratio,
        n_train: train.rows(),
        n_test: test.rows(),
        excluded_train,
        excluded_test,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub mode: ReadoutMode,
    pub task: TaskSpec,
    pub nrmse_train: f64,
    pub nrmse_test: f64,
    pub untrained_rmse_ratio: f64,
}

fn score(run: &TrialRun, config: &ExperimentConfig, mode: ReadoutMode, kind: TaskKind) -> Result<TrialResult> {
    let task = config.task_spec(kind);
    let input = &run.input;
    let out = evaluate_cell(run, config, mode, |t, _| task.target(input, t))?;
    Ok(TrialResult {
        seed: run.seed,
        mode,
        task,
        nrmse_train: out.nrmse_train,
        nrmse_test: out.nrmse_test,
        untrained_rmse_ratio: out.untrained_rmse_ratio,
    })
}

fn in_trial<T>(seed: u64, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Trial { seed, source: Box::new(e) })
}

/// One trial for the configured mode and task.
pub fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialResult> {
    in_trial(seed, simulate_trial(config, seed).and_then(|run| score(&run, config, config.mode, config.task)))
}

/// Benchmark cells in output order.
pub const CELLS: [(ReadoutMode, TaskKind); 4] = [
    (ReadoutMode::ProductOnly, TaskKind::A),
    (ReadoutMode::ProductOnly, TaskKind::B),
    (ReadoutMode::ProductAndSubstrate, TaskKind::A),
    (ReadoutMode::ProductAndSubstrate, TaskKind::B),
];

/// All four cells on a single shared trace.
pub fn run_trial_cells(config: &ExperimentConfig, seed: u64) -> Result<Vec<TrialResult>> {
    in_trial(
        seed,
        simulate_trial(config, seed)
            .and_then(|run| CELLS.iter().map(|&(m, k)| score(&run, config, m, k)).collect()),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mode: ReadoutMode,
    pub task: TaskKind,
    /// Mean test NRMSE.
    pub mean: f64,
    /// Sample standard deviation of the test NRMSE.
    pub std: f64,
    pub mean_train: f64,
    pub per_trial: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkStats {
    pub n_trials: usize,
    pub master_seed: u64,
    pub cells: Vec<CellStats>,
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub trials: Vec<TrialResult>,
}

impl BenchmarkStats {
    pub fn cell(&self, mode: ReadoutMode, task: TaskKind) -> Option<&CellStats> {
        self.cells.iter().find(|c| c.mode == mode && c.task == task)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }

    /// `seed,mode,task,nrmse_train,nrmse_test` per trial and cell.
    pub fn trials_csv(&self) -> String {
        let mut s = String::from("seed,mode,task,nrmse_train,nrmse_test\n");
        for t in &self.trials {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                t.seed,
                t.mode,
                t.task.kind,
                crate::format::fmt_g(t.nrmse_train, 9),
                crate::format::fmt_g(t.nrmse_test, 9)
            ));
        }
        s
    }
}

/// Mean and unbiased standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs `n_trials` paired trials with seeds derived from `config.master_seed`.
///
/// Trials run in parallel; results are reduced in trial order so the output
/// does not depend on scheduling.
pub fn run_benchmark(config: &ExperimentConfig, n_trials: usize) -> Result<BenchmarkStats> {
    if n_trials < 2 {
        return Err(Error::InvalidParam { name: "n_trials", reason: "must be >= 2".into() });
    }
    config.validate()?;
    let per_trial: Vec<Vec<TrialResult>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|i| run_trial_cells(config, trial_seed(config.master_seed, i)))
        .collect::<Result<_>>()?;

    let cells = CELLS
        .iter()
        .enumerate()
        .map(|(ci, &(mode, task))| {
            let test: Vec<f64> = per_trial.iter().map(|t| t[ci].nrmse_test).collect();
            let train: Vec<f64> = per_trial.iter().map(|t| t[ci].nrmse_train).collect();
            let (mean, std) = mean_std(&test);
            CellStats { mode, task, mean, std, mean_train: mean_std(&train).0, per_trial: test }
        })
        .collect();

    Ok(BenchmarkStats {
        n_trials,
        master_seed: config.master_seed,
        cells,
        config: config.clone(),
        trials: per_trial.into_iter().flatten().collect(),
    })
}
