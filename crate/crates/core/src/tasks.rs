//! Delay-recall targets on the channel-1 influx and the NRMSE metric.
//!
//! - Task A: `S₁ᵐ(t−1) + 2·S₁ᵐ(t−2)`, with the lag read in seconds
//!   ([`TaskAInterp::Seconds`]) or in hold windows ([`TaskAInterp::Windows`]).
//! - Task B: `S₁ᵐ(t−τ) + ½·S₁ᵐ(t−3τ/2)`.
//!
//! A target is undefined (`None`) when any lag reaches back before the
//! fluctuation starts; such samples are dropped from training and scoring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reactor::InfluxProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    A,
    B,
}

impl TaskKind {
    pub const ALL: [TaskKind; 2] = [TaskKind::A, TaskKind::B];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::A => "A",
            TaskKind::B => "B",
        }
    }
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

impl std::str::FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "A" | "a" => Ok(TaskKind::A),
            "B" | "b" => Ok(TaskKind::B),
            _ => Err(format!("unknown task `{s}` (A | B)")),
        }
    }
}

/// Unit of the Task A lags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskAInterp {
    /// Lags of 1 s and 2 s.
    #[default]
    Seconds,
    /// Lags of one and two hold windows.
    Windows,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub tau: f64,
    pub task_a_interp: TaskAInterp,
}

impl TaskSpec {
    pub fn new(kind: TaskKind, tau: f64) -> Self {
        Self { kind, tau, task_a_interp: TaskAInterp::default() }
    }

    pub fn target(&self, input: &InfluxProfile, t: f64) -> Option<f64> {
        match self.kind {
            TaskKind::A => task_a_target(input, t, self.task_a_interp),
            TaskKind::B => task_b_target(input, t),
        }
    }
}

// Lookups land exactly on window edges; absorb rounding there.
const EDGE_EPS: f64 = 1e-9;

fn rate1(input: &InfluxProfile, t: f64) -> f64 {
    input.channel_rate_at(input.channel, t)
}

pub fn task_a_target(input: &InfluxProfile, t: f64, interp: TaskAInterp) -> Option<f64> {
    match interp {
        TaskAInterp::Seconds => {
            if t - 2.0 < input.start_time - EDGE_EPS {
                return None;
            }
            Some(rate1(input, t - 1.0) + 2.0 * rate1(input, t - 2.0))
        }
        TaskAInterp::Windows => {
            let k = input.window_index(t)?;
            if k < 2 {
                return None;
            }
            Some(input.window_rate(k - 1) + 2.0 * input.window_rate(k - 2))
        }
    }
}

pub fn task_b_target(input: &InfluxProfile, t: f64) -> Option<f64> {
    let tau = input.hold_time;
    if t < input.start_time + 1.5 * tau - EDGE_EPS * tau {
        return None;
    }
    Some(rate1(input, t - tau) + 0.5 * rate1(input, t - 1.5 * tau))
}

/// Which vector's range normalizes the RMSE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalizer {
    #[default]
    TargetRange,
    OutputRange,
}

/// `RMSE(target, output) / (max − min)` of the target or of the output.
pub fn nrmse(target: &[f64], output: &[f64], normalize_by: Normalizer) -> Result<f64> {
    if output.len() != target.len() {
        return Err(Error::Dimension { expected: target.len(), actual: output.len() });
    }
    if target.len() < 2 {
        return Err(Error::InvalidParam { name: "n", reason: "NRMSE needs at least two samples".into() });
    }
    if target.iter().chain(output).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "y" });
    }
    let reference = match normalize_by {
        Normalizer::TargetRange => target,
        Normalizer::OutputRange => output,
    };
    let (lo, hi) = reference.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if range <= 0.0 {
        return Err(Error::DegenerateNormalizer);
    }
    Ok(rmse(target, output) / range)
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    let sse: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
    (sse / a.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(values: Vec<f64>) -> InfluxProfile {
        InfluxProfile { base: [2.0; 3], hold_time: 100.0, start_time: 500.0, values, channel: 0 }
    }

    #[test]
    fn constant_signal() {
        let p = profile(vec![0.5; 30]);
        for &t in &[900.0, 1234.5, 2999.0] {
            assert!((task_a_target(&p, t, TaskAInterp::Windows).unwrap() - 3.0).abs() < 1e-15);
            assert!((task_a_target(&p, t, TaskAInterp::Seconds).unwrap() - 3.0).abs() < 1e-15);
            assert!((task_b_target(&p, t).unwrap() - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn task_a_windows_substitution() {
        let p = profile(vec![0.2, 0.7, 0.1, 0.9]);
        let got = task_a_target(&p, 750.0, TaskAInterp::Windows).unwrap();
        assert!((got - 2.0 * (0.7 + 0.4)).abs() < 1e-15);
        assert_eq!(task_a_target(&p, 699.0, TaskAInterp::Windows), None);
        assert!(task_a_target(&p, 700.0, TaskAInterp::Windows).is_some());
        assert_eq!(task_a_target(&p, 450.0, TaskAInterp::Windows), None);
    }

    #[test]
    fn task_a_seconds_piecewise() {
        let p = profile(vec![0.2, 0.7, 0.1, 0.9]);
        // mid-window: 3 × current value
        assert!((task_a_target(&p, 650.0, TaskAInterp::Seconds).unwrap() - 3.0 * 1.4).abs() < 1e-15);
        // 1 s after a boundary: t−1 in the new window, t−2 in the old one
        assert!((task_a_target(&p, 601.0, TaskAInterp::Seconds).unwrap() - (1.4 + 2.0 * 0.4)).abs() < 1e-15);
        assert!((task_a_target(&p, 602.0, TaskAInterp::Seconds).unwrap() - 3.0 * 1.4).abs() < 1e-15);
        assert_eq!(task_a_target(&p, 501.0, TaskAInterp::Seconds), None);
        assert!(task_a_target(&p, 502.0, TaskAInterp::Seconds).is_some());
    }

    #[test]
    fn task_b_boundaries() {
        let p = profile(vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(task_b_target(&p, 649.0), None);
        // t = 650: lags at 550 (window 0) and 500 (window 0, left-closed)
        assert!((task_b_target(&p, 650.0).unwrap() - 1.5 * 0.2).abs() < 1e-15);
        // t = 800: lags at 700 (window 2) and 650 (window 1)
        assert!((task_b_target(&p, 800.0).unwrap() - (0.6 + 0.5 * 0.4)).abs() < 1e-15);
    }

    #[test]
    fn nrmse_values() {
        assert_eq!(nrmse(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], Normalizer::TargetRange).unwrap(), 0.0);
        let v = nrmse(&[0.0, 2.0], &[1.0, 1.0], Normalizer::TargetRange).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        // target (0, 0), output (0, 2): RMSE √2 over output range 2
        let v = nrmse(&[0.0, 0.0], &[0.0, 2.0], Normalizer::OutputRange).unwrap();
        assert!((v - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!((v - 0.7071).abs() < 1e-4);
    }

    #[test]
    fn nrmse_errors() {
        assert!(matches!(nrmse(&[3.0, 3.0], &[1.0, 2.0], Normalizer::TargetRange), Err(Error::DegenerateNormalizer)));
        assert!(nrmse(&[1.0], &[1.0], Normalizer::TargetRange).is_err());
        assert!(nrmse(&[1.0, 2.0], &[1.0, 2.0, 3.0], Normalizer::TargetRange).is_err());
    }
}
