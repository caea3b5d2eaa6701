//! Linearized analysis of the product ring.
//!
//! With substrates frozen at `S`, the product subsystem has Jacobian
//! `−(e/V)·I` plus a cyclic coupling `−hβS_i`. Its spectrum depends on `S`
//! only through the geometric mean `m = (S₁S₂S₃)^(1/3)`:
//!
//! ```text
//! λ₁    = −hβ·m − e/V
//! λ₂,₃  =  ½hβ·m − e/V ± i·(√3/2)·hβ·m
//! ```

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reactor::{ChemTrace, ReactorParams};

/// Default band around zero real part that counts as sustained (s⁻¹).
pub const REGIME_EPS: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Damped,
    Sustained,
    Growing,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Regime::Damped => "damped",
            Regime::Sustained => "sustained",
            Regime::Growing => "growing",
        })
    }
}

/// Closed-form spectrum of the product Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub lambda1: f64,
    pub lambda23_real: f64,
    pub lambda23_imag: f64,
    /// `2π / Im λ₂` (s); infinite when there is no coupling.
    pub period: f64,
    pub regime: Regime,
}

fn check_substrates(s: &[f64; 3]) -> Result<()> {
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "S" });
    }
    if s.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParam { name: "S", reason: "substrate levels must be >= 0".into() });
    }
    Ok(())
}

/// Product Jacobian at fixed substrate levels (rows and columns `P₁, P₂, P₃`).
///
/// Couplings sit at `(1,2)`, `(2,3)`, `(3,1)` and row `i` carries `−hβS_i`.
pub fn jacobian(params: &ReactorParams, s: &[f64; 3]) -> Result<Matrix3<f64>> {
    params.validate()?;
    check_substrates(s)?;
    let d = -params.dilution();
    let hb = params.effective_rate();
    Ok(Matrix3::new(
        d,
        -hb * s[0],
        0.0,
        0.0,
        d,
        -hb * s[1],
        -hb * s[2],
        0.0,
        d,
    ))
}

pub fn classify_real_part(re: f64, eps: f64) -> Regime {
    if re.abs() <= eps {
        Regime::Sustained
    } else if re < 0.0 {
        Regime::Damped
    } else {
        Regime::Growing
    }
}

pub fn eigen_closed_form(params: &ReactorParams, s: &[f64; 3]) -> Result<EigenResult> {
    eigen_closed_form_with(params, s, REGIME_EPS)
}

pub fn eigen_closed_form_with(params: &ReactorParams, s: &[f64; 3], eps: f64) -> Result<EigenResult> {
    params.validate()?;
    check_substrates(s)?;
    let m = (s[0] * s[1] * s[2]).cbrt();
    let hbm = params.effective_rate() * m;
    let dil = params.dilution();
    let lambda23_real = 0.5 * hbm - dil;
    let lambda23_imag = 0.5 * 3f64.sqrt() * hbm;
    let period = if lambda23_imag > 0.0 {
        2.0 * std::f64::consts::PI / lambda23_imag
    } else {
        f64::INFINITY
    };
    Ok(EigenResult {
        lambda1: -hbm - dil,
        lambda23_real,
        lambda23_imag,
        period,
        regime: classify_real_part(lambda23_real, eps),
    })
}

/// Uniform substrate level `2(e/V)/(hβ)` at which the complex pair sits on the imaginary axis.
pub fn sustained_substrate_level(params: &ReactorParams) -> Result<f64> {
    params.validate()?;
    Ok(2.0 * params.dilution() / params.effective_rate())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeOptions {
    /// Leading span of the trace to ignore (s).
    pub transient: f64,
    /// Relative amplitude change tolerated as sustained.
    pub delta: f64,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        Self { transient: 500.0, delta: 0.1 }
    }
}

/// Empirical oscillation report for `P₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationReport {
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// Peak minus the lowest value before the next peak, one per complete cycle.
    pub amplitudes: Vec<f64>,
    /// `None` when fewer than two peaks were found.
    pub regime: Option<Regime>,
}

impl OscillationReport {
    /// Mean peak-to-peak interval (s).
    pub fn mean_period(&self) -> Option<f64> {
        let n = self.peak_times.len();
        (n >= 2).then(|| (self.peak_times[n - 1] - self.peak_times[0]) / (n - 1) as f64)
    }

    pub fn amplitude_ratio(&self) -> Option<f64> {
        let first = *self.amplitudes.first()?;
        let last = *self.amplitudes.last()?;
        Some(last / first)
    }
}

/// Strict local maxima over a 3-sample window: `x[i-1] < x[i] >= x[i+1]`.
pub fn local_maxima(xs: &[f64]) -> Vec<usize> {
    (1..xs.len().saturating_sub(1))
        .filter(|&i| xs[i] > xs[i - 1] && xs[i] >= xs[i + 1])
        .collect()
}

/// Classifies the `P₁` oscillation after the transient by per-cycle swing.
///
/// Each cycle's amplitude is the peak minus the trough that follows it. The
/// ratio of the last amplitude to the first decides the regime.
pub fn classify_regime(trace: &ChemTrace, opts: &RegimeOptions) -> OscillationReport {
    let t0 = trace.t0() + opts.transient;
    let offset = trace.rows.iter().position(|r| r.t >= t0 - 1e-9).unwrap_or(trace.len());
    let series: Vec<f64> = trace.rows[offset..].iter().map(|r| r.products[0]).collect();
    let peaks = local_maxima(&series);

    let amplitudes: Vec<f64> = peaks
        .windows(2)
        .map(|w| {
            let trough = series[w[0]..=w[1]].iter().copied().fold(f64::INFINITY, f64::min);
            series[w[0]] - trough
        })
        .collect();

    let regime = (peaks.len() >= 2).then(|| {
        let ratio = amplitudes[amplitudes.len() - 1] / amplitudes[0];
        if ratio < 1.0 - opts.delta {
            Regime::Damped
        } else if ratio > 1.0 + opts.delta {
            Regime::Growing
        } else {
            Regime::Sustained
        }
    });

    OscillationReport {
        peak_times: peaks.iter().map(|&i| trace.rows[offset + i].t).collect(),
        peak_values: peaks.iter().map(|&i| series[i]).collect(),
        amplitudes,
        regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reactor::ChemState;

    fn defaults() -> ReactorParams {
        ReactorParams::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn jacobian_without_substrate_is_diagonal() {
        let j = jacobian(&defaults(), &[0.0; 3]).unwrap();
        let d = -defaults().dilution();
        assert_eq!(j, Matrix3::from_diagonal_element(d));
    }

    #[test]
    fn jacobian_at_sustained_level() {
        let j = jacobian(&defaults(), &[59985.0; 3]).unwrap();
        for i in 0..3 {
            assert!(rel(j[(i, i)], -1.17706e-2) < 1e-5);
            assert!(rel(j[(i, (i + 1) % 3)], -2.35411e-2) < 1e-5, "{}", j[(i, (i + 1) % 3)]);
            assert_eq!(j[(i, (i + 2) % 3)], 0.0);
        }
    }

    #[test]
    fn jacobian_trace() {
        let p = defaults();
        let j = jacobian(&p, &[1.0, 2e4, 7e4]).unwrap();
        assert!((j.trace() + 3.0 * p.dilution()).abs() < 1e-15);
    }

    #[test]
    fn negative_substrate_rejected() {
        assert!(jacobian(&defaults(), &[1.0, -1.0, 1.0]).is_err());
        assert!(eigen_closed_form(&defaults(), &[f64::NAN, 1.0, 1.0]).is_err());
    }

    #[test]
    fn eigen_without_substrate() {
        let e = eigen_closed_form(&defaults(), &[0.0; 3]).unwrap();
        let d = -defaults().dilution();
        assert_eq!(e.lambda1, d);
        assert_eq!(e.lambda23_real, d);
        assert_eq!(e.lambda23_imag, 0.0);
        assert!(e.period.is_infinite());
        assert_eq!(e.regime, Regime::Damped);
    }

    #[test]
    fn eigen_at_sustained_level() {
        // ½hβS = e/V → S = 2·(0.08875/7.54)/(0.7849·5e-7)
        let e = eigen_closed_form(&defaults(), &[59985.0; 3]).unwrap();
        assert!(e.lambda23_real.abs() < 1e-6);
        assert!(rel(e.lambda23_imag, 2.0387e-2) < 1e-4, "{}", e.lambda23_imag);
        assert!((e.period - 308.2).abs() < 0.1, "{}", e.period);
        assert_eq!(e.regime, Regime::Sustained);
    }

    #[test]
    fn sustained_level_values() {
        let p = defaults();
        let s = sustained_substrate_level(&p).unwrap();
        assert!(rel(s, 5.9985e4) < 1e-4, "{s}");
        let e = eigen_closed_form(&p, &[s; 3]).unwrap();
        assert_eq!(e.regime, Regime::Sustained);
        assert!(e.lambda23_real.abs() < 1e-15);

        let mut doubled = p;
        doubled.efflux *= 2.0;
        assert!(rel(sustained_substrate_level(&doubled).unwrap(), 2.0 * s) < 1e-14);

        let mut closed = p;
        closed.efflux = 0.0;
        assert_eq!(sustained_substrate_level(&closed).unwrap(), 0.0);
    }

    #[test]
    fn regime_sign() {
        assert_eq!(classify_real_part(2e-5, REGIME_EPS), Regime::Growing);
        assert_eq!(classify_real_part(-2e-5, REGIME_EPS), Regime::Damped);
        assert_eq!(classify_real_part(5e-6, REGIME_EPS), Regime::Sustained);
    }

    fn synthetic(f: impl Fn(f64) -> f64, t_end: usize) -> ChemTrace {
        let rows = (0..=t_end)
            .map(|k| {
                let t = k as f64;
                ChemState { t, products: [f(t), 0.0, 0.0], substrates: [0.0; 3] }
            })
            .collect();
        ChemTrace {
            dt_sample: 1.0,
            rows,
            influx1: vec![0.0; t_end + 1],
            guard_violations: 0,
            negative_clamps: 0,
        }
    }

    #[test]
    fn constant_trace_has_no_oscillation() {
        let r = classify_regime(&synthetic(|_| 42.0, 3000), &RegimeOptions::default());
        assert!(r.peak_times.is_empty());
        assert_eq!(r.regime, None);
    }

    #[test]
    fn decaying_sine_is_damped() {
        let trace = synthetic(|t| (-t / 100.0).exp() * (0.02 * t).sin() + 5.0, 2500);
        let opts = RegimeOptions { transient: 0.0, ..Default::default() };
        let r = classify_regime(&trace, &opts);
        assert!(r.peak_times.len() >= 3);
        assert_eq!(r.regime, Some(Regime::Damped));
    }

    #[test]
    fn steady_and_growing_sines() {
        let opts = RegimeOptions::default();
        let r = classify_regime(&synthetic(|t| 1e3 + 50.0 * (0.02 * t).sin(), 4500), &opts);
        assert_eq!(r.regime, Some(Regime::Sustained));
        let period = r.mean_period().unwrap();
        assert!((period - 2.0 * std::f64::consts::PI / 0.02).abs() < 1.0, "{period}");

        let r = classify_regime(&synthetic(|t| (t / 2000.0).exp() * (0.02 * t).sin(), 4500), &opts);
        assert_eq!(r.regime, Some(Regime::Growing));
    }
}
