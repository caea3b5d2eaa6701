//! Experiment configuration as JSON.
//!
//! Every key is optional and defaults to the published protocol: 500 s of
//! settling at constant influx, then 2000 s of training and 2000 s of testing
//! under a random influx held for 100 s per value. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rc::{ReadoutMode, TrainOptions};
use crate::reactor::{ChemState, ReactorParams, StepConfig, BASE_INFLUX};
use crate::tasks::{Normalizer, TaskAInterp, TaskKind, TaskSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub reactor: ReactorParams,
    pub initial: ChemState,
    /// Base substrate influx on every channel (nmol/s).
    pub influx_base: f64,
    /// Input hold time (s).
    pub tau: f64,
    pub settle_s: f64,
    pub train_s: f64,
    pub test_s: f64,
    pub dt: f64,
    pub dt_sample: f64,
    /// Readout sampling stride (s).
    pub stride: f64,
    pub mode: ReadoutMode,
    pub task: TaskKind,
    #[serde(rename = "taskA_interp")]
    pub task_a_interp: TaskAInterp,
    pub normalize_by: Normalizer,
    pub ridge: f64,
    pub ridge_bias: bool,
    pub master_seed: u64,
    pub n_trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            reactor: ReactorParams::default(),
            initial: ChemState::default(),
            influx_base: BASE_INFLUX,
            tau: 100.0,
            settle_s: 500.0,
            train_s: 2000.0,
            test_s: 2000.0,
            dt: 0.05,
            dt_sample: 1.0,
            stride: 1.0,
            mode: ReadoutMode::ProductAndSubstrate,
            task: TaskKind::B,
            task_a_interp: TaskAInterp::Seconds,
            normalize_by: Normalizer::TargetRange,
            ridge: 0.0,
            ridge_bias: false,
            master_seed: 1,
            n_trials: 100,
        }
    }
}

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::Config { key: key.into(), reason: reason.into() }
}

fn is_multiple(a: f64, b: f64) -> bool {
    let q = a / b;
    q >= 1.0 - 1e-9 && (q - q.round()).abs() < 1e-6
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| bad(&json_error_key(&e), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.reactor.validate().map_err(|e| match e {
            Error::InvalidParam { name, reason } => bad(&format!("reactor.{name}"), reason),
            Error::NonFinite { field } => bad(&format!("reactor.{field}"), "must be finite"),
            other => other,
        })?;
        self.initial.validate().map_err(|e| bad("initial", e.to_string()))?;
        let positive = [
            ("tau", self.tau),
            ("train_s", self.train_s),
            ("test_s", self.test_s),
            ("dt", self.dt),
            ("dt_sample", self.dt_sample),
            ("stride", self.stride),
        ];
        for (key, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(bad(key, format!("must be > 0, got {v}")));
            }
        }
        if !(self.settle_s >= 0.0) || !self.settle_s.is_finite() {
            return Err(bad("settle_s", format!("must be >= 0, got {}", self.settle_s)));
        }
        if !(self.influx_base >= 0.0) || !self.influx_base.is_finite() {
            return Err(bad("influx_base", format!("must be >= 0, got {}", self.influx_base)));
        }
        if !(self.ridge >= 0.0) || !self.ridge.is_finite() {
            return Err(bad("ridge", format!("must be >= 0, got {}", self.ridge)));
        }
        if !is_multiple(self.dt_sample, self.dt) {
            return Err(bad("dt_sample", "must be an integer multiple of dt"));
        }
        if !is_multiple(self.stride, self.dt_sample) {
            return Err(bad("stride", "must be an integer multiple of dt_sample"));
        }
        for (key, v) in [("tau", self.tau), ("train_s", self.train_s), ("test_s", self.test_s)] {
            if !is_multiple(v, self.dt_sample) {
                return Err(bad(key, "must be an integer multiple of dt_sample"));
            }
        }
        if self.settle_s > 0.0 && !is_multiple(self.settle_s, self.dt_sample) {
            return Err(bad("settle_s", "must be an integer multiple of dt_sample"));
        }
        if self.initial.t != 0.0 {
            return Err(bad("initial.t", "the protocol starts at t = 0"));
        }
        if self.n_trials < 2 {
            return Err(bad("n_trials", "must be >= 2"));
        }
        Ok(())
    }

    pub fn step(&self) -> StepConfig {
        StepConfig { dt: self.dt, dt_sample: self.dt_sample }
    }

    pub fn train_options(&self) -> TrainOptions {
        TrainOptions { ridge: self.ridge, ridge_bias: self.ridge_bias }
    }

    pub fn task_spec(&self, kind: TaskKind) -> TaskSpec {
        TaskSpec { kind, tau: self.tau, task_a_interp: self.task_a_interp }
    }

    pub fn train_window(&self) -> (f64, f64) {
        (self.settle_s, self.settle_s + self.train_s)
    }

    pub fn test_window(&self) -> (f64, f64) {
        let (_, start) = self.train_window();
        (start, start + self.test_s)
    }

    pub fn t_end(&self) -> f64 {
        self.settle_s + self.train_s + self.test_s
    }
}

/// Best-effort key name from a serde error message.
fn json_error_key(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    if let Some(rest) = msg.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return rest[..end].to_string();
        }
    }
    "<json>".to_string()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    ExperimentConfig::from_json(&text)
}

pub fn save_config(cfg: &ExperimentConfig, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, cfg.to_json() + "\n")?;
    Ok(())
}
