//! Reduced three-oscillator deoxyribozyme network in an open microfluidic reactor.
//!
//! State is three product and three substrate concentrations (nM). Each gate
//! `i` cleaves substrate `S_i` into product `P_i` and is inhibited by the
//! product of the previous oscillator in the ring (`P_3` inhibits gate 1,
//! `P_1` gate 2, `P_2` gate 3). Substrates enter through per-channel influx
//! and everything leaves with the efflux.
//!
//! ```text
//! dP_i/dt = h·β·S_i·(G_i − P_{i−1}) − (e/V)·P_i
//! dS_i/dt = κ·Sm_i/V − h·β·S_i·(G_i − P_{i−1}) − (e/V)·S_i
//! ```
//!
//! `κ` converts the influx term from nmol/nL/s to nM/s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// nM per (nmol/nL).
pub const NM_PER_NMOL_PER_NL: f64 = 1e9;

/// Base substrate influx for every channel (nmol/s).
pub const BASE_INFLUX: f64 = 5.45e-6;

/// Index of the product that inhibits gate `i`.
#[inline]
pub const fn inhibitor_of(i: usize) -> usize {
    (i + 2) % 3
}

/// Physical constants of the open reactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReactorParams {
    /// Reactor volume (nL).
    #[serde(rename = "V")]
    pub volume: f64,
    /// Efflux rate (nL/s).
    #[serde(rename = "e")]
    pub efflux: f64,
    /// Well-mixed fraction of the chamber.
    #[serde(rename = "h")]
    pub mixed_fraction: f64,
    /// Gate–substrate rate constant (nM⁻¹·s⁻¹).
    pub beta: f64,
    /// Gate concentrations (nM).
    #[serde(rename = "G")]
    pub gates: [f64; 3],
}

impl Default for ReactorParams {
    fn default() -> Self {
        Self {
            volume: 7.54,
            efflux: 8.8750e-2,
            mixed_fraction: 0.7849,
            beta: 5e-7,
            gates: [2500.0; 3],
        }
    }
}

impl ReactorParams {
    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, ok: bool, v: f64, rule: &str) -> Result<()> {
            if !v.is_finite() {
                return Err(Error::NonFinite { field: name });
            }
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParam { name, reason: format!("{v} violates {rule}") })
            }
        }
        check("V", self.volume > 0.0, self.volume, "V > 0")?;
        check("e", self.efflux >= 0.0, self.efflux, "e >= 0")?;
        check(
            "h",
            self.mixed_fraction > 0.0 && self.mixed_fraction <= 1.0,
            self.mixed_fraction,
            "0 < h <= 1",
        )?;
        check("beta", self.beta > 0.0, self.beta, "beta > 0")?;
        for &g in &self.gates {
            check("G", g > 0.0, g, "G_i > 0")?;
        }
        Ok(())
    }

    /// Dilution rate `e/V` (s⁻¹).
    #[inline]
    pub fn dilution(&self) -> f64 {
        self.efflux / self.volume
    }

    /// Effective second-order rate `h·β` (nM⁻¹·s⁻¹).
    #[inline]
    pub fn effective_rate(&self) -> f64 {
        self.mixed_fraction * self.beta
    }

    /// Influx-driven steady total `P_i + S_i` for an influx of `rate` nmol/s.
    pub fn steady_total(&self, rate: f64) -> f64 {
        NM_PER_NMOL_PER_NL * rate / self.efflux
    }
}

/// Concentrations at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChemState {
    pub t: f64,
    #[serde(rename = "P")]
    pub products: [f64; 3],
    #[serde(rename = "S")]
    pub substrates: [f64; 3],
}

impl Default for ChemState {
    /// `P = (1000, 0, 0)`, `S = 0` at `t = 0`; the asymmetric product kick starts the oscillation.
    fn default() -> Self {
        Self { t: 0.0, products: [1000.0, 0.0, 0.0], substrates: [0.0; 3] }
    }
}

impl ChemState {
    pub fn zero() -> Self {
        Self { t: 0.0, products: [0.0; 3], substrates: [0.0; 3] }
    }

    fn to_array(self) -> [f64; 6] {
        let [p1, p2, p3] = self.products;
        let [s1, s2, s3] = self.substrates;
        [p1, p2, p3, s1, s2, s3]
    }

    fn from_array(t: f64, y: [f64; 6]) -> Self {
        Self { t, products: [y[0], y[1], y[2]], substrates: [y[3], y[4], y[5]] }
    }

    /// `P_i + S_i` per oscillator.
    pub fn totals(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.products[i] + self.substrates[i])
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return Err(Error::NonFinite { field: "t" });
        }
        if self.products.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { field: "P" });
        }
        if self.substrates.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { field: "S" });
        }
        if self.products.iter().chain(&self.substrates).any(|&v| v < 0.0) {
            return Err(Error::InvalidParam {
                name: "initial",
                reason: "concentrations must be >= 0".into(),
            });
        }
        Ok(())
    }
}

/// Piecewise-constant substrate influx schedule.
///
/// Before `start_time` every channel runs at its base rate. From `start_time`
/// on, the fluctuated channel runs at `base · values[k]` on window
/// `[start + kτ, start + (k+1)τ)`. Past the last window it reverts to base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluxProfile {
    /// Base influx per channel (nmol/s).
    pub base: [f64; 3],
    /// Hold time τ (s).
    pub hold_time: f64,
    pub start_time: f64,
    /// Per-window multipliers in [0, 1].
    pub values: Vec<f64>,
    /// Zero-based index of the fluctuated channel.
    pub channel: usize,
}

// Tolerance for window lookup at exact boundaries.
const BOUNDARY_EPS: f64 = 1e-9;

impl InfluxProfile {
    /// Every channel at `base` forever.
    pub fn constant(base: [f64; 3]) -> Self {
        Self { base, hold_time: 1.0, start_time: f64::INFINITY, values: Vec::new(), channel: 0 }
    }

    /// Index of the window containing `t`, if the fluctuation is active there.
    pub fn window_index(&self, t: f64) -> Option<usize> {
        if !(t >= self.start_time - BOUNDARY_EPS * self.hold_time) {
            return None;
        }
        let k = ((t - self.start_time) / self.hold_time + BOUNDARY_EPS).floor();
        if k < 0.0 {
            return None;
        }
        let k = k as usize;
        (k < self.values.len()).then_some(k)
    }

    /// Influx on the fluctuated channel during window `k`.
    pub fn window_rate(&self, k: usize) -> f64 {
        self.base[self.channel] * self.values[k]
    }

    /// Influx rate on `channel` at time `t` (nmol/s).
    pub fn channel_rate_at(&self, channel: usize, t: f64) -> f64 {
        if channel != self.channel {
            return self.base[channel];
        }
        match self.window_index(t) {
            Some(k) => self.window_rate(k),
            None => self.base[channel],
        }
    }

    pub fn rates_at(&self, t: f64) -> [f64; 3] {
        std::array::from_fn(|c| self.channel_rate_at(c, t))
    }

    /// End of the last fluctuation window.
    pub fn end_time(&self) -> f64 {
        self.start_time + self.hold_time * self.values.len() as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.channel > 2 {
            return Err(Error::InvalidParam { name: "channel", reason: "must be 0, 1 or 2".into() });
        }
        if self.base.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidParam { name: "base", reason: "influx must be finite and >= 0".into() });
        }
        if !(self.hold_time > 0.0) || !self.hold_time.is_finite() {
            return Err(Error::InvalidParam { name: "tau", reason: "hold time must be > 0".into() });
        }
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParam { name: "values", reason: "multipliers must be finite and >= 0".into() });
        }
        Ok(())
    }
}

/// Right-hand side evaluation result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    /// `(dP₁, dP₂, dP₃, dS₁, dS₂, dS₃)` in nM/s.
    pub values: [f64; 6],
    /// Whether any gate-occupancy factor `G_i − P_j` was negative and clamped to 0.
    pub gate_clamped: bool,
}

/// Time derivatives of the reduced oscillator network for a fixed influx vector (nmol/s).
pub fn derivatives(state: &ChemState, params: &ReactorParams, influx: [f64; 3]) -> Result<Rates> {
    if state.products.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "P" });
    }
    if state.substrates.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "S" });
    }
    if influx.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "influx" });
    }
    Ok(rhs(&state.to_array(), params, &influx))
}

#[inline]
fn rhs(y: &[f64; 6], params: &ReactorParams, influx: &[f64; 3]) -> Rates {
    let hb = params.effective_rate();
    let dil = params.dilution();
    let feed = NM_PER_NMOL_PER_NL / params.volume;
    let mut out = [0.0; 6];
    let mut gate_clamped = false;
    for i in 0..3 {
        let free = params.gates[i] - y[inhibitor_of(i)];
        let free = if free < 0.0 {
            gate_clamped = true;
            0.0
        } else {
            free
        };
        let cleave = hb * y[3 + i] * free;
        out[i] = cleave - dil * y[i];
        out[3 + i] = feed * influx[i] - cleave - dil * y[3 + i];
    }
    Rates { values: out, gate_clamped }
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    /// RK4 step (s).
    pub dt: f64,
    /// Spacing of stored rows (s); must be an integer multiple of `dt`.
    pub dt_sample: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self { dt: 0.05, dt_sample: 1.0 }
    }
}

/// Sampled trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ChemTrace {
    pub dt_sample: f64,
    pub rows: Vec<ChemState>,
    /// Channel-1 influx at each row time (nmol/s).
    pub influx1: Vec<f64>,
    /// Steps in which a gate-occupancy clamp fired.
    pub guard_violations: usize,
    /// Concentrations clamped up to 0 after a step.
    pub negative_clamps: usize,
}

impl ChemTrace {
    pub fn t0(&self) -> f64 {
        self.rows[0].t
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row index for time `t`, if it lies on the sample grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = ((t - self.t0()) / self.dt_sample).round();
        if k < 0.0 || (self.t0() + k * self.dt_sample - t).abs() > 1e-6 * self.dt_sample.max(1.0) {
            return None;
        }
        let k = k as usize;
        (k < self.rows.len()).then_some(k)
    }

    /// Time series of product `i`.
    pub fn product(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.products[i]).collect()
    }

    pub fn substrate(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.substrates[i]).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }
}

fn ratio_as_count(num: f64, den: f64, what: &str) -> Result<usize> {
    let q = num / den;
    let k = q.round();
    if k < 0.0 || (q - k).abs() > 1e-6 {
        return Err(Error::Misaligned(format!("{what} = {q} is not an integer")));
    }
    Ok(k as usize)
}

/// Integrates from `state0` to `t_end` with classical RK4 at fixed step.
///
/// The influx is frozen over each step at the window containing the step
/// start, so schedule boundaries must fall on step boundaries. After each
/// step, negative concentrations are clamped to 0.
pub fn integrate(
    state0: &ChemState,
    params: &ReactorParams,
    influx: &InfluxProfile,
    t_end: f64,
    step: StepConfig,
) -> Result<ChemTrace> {
    params.validate()?;
    state0.validate()?;
    influx.validate()?;
    let StepConfig { dt, dt_sample } = step;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParam { name: "dt", reason: "must be > 0".into() });
    }
    if !(t_end > state0.t) {
        return Err(Error::InvalidParam { name: "t_end", reason: "must exceed the initial time".into() });
    }
    let per_sample = ratio_as_count(dt_sample, dt, "dt_sample / dt")?;
    if per_sample == 0 {
        return Err(Error::InvalidParam { name: "dt_sample", reason: "must be >= dt".into() });
    }
    let n_samples = ratio_as_count(t_end - state0.t, dt_sample, "(t_end - t0) / dt_sample")?;
    if influx.start_time.is_finite() {
        ratio_as_count(influx.start_time - state0.t, dt, "(start_time - t0) / dt").or_else(|e| {
            // A schedule starting before t0 only needs its windows on the grid.
            if influx.start_time < state0.t {
                Ok(0)
            } else {
                Err(e)
            }
        })?;
        ratio_as_count(influx.hold_time, dt, "tau / dt")?;
    }

    let t0 = state0.t;
    let mut y = state0.to_array();
    let mut rows = Vec::with_capacity(n_samples + 1);
    let mut influx1 = Vec::with_capacity(n_samples + 1);
    rows.push(*state0);
    influx1.push(influx.channel_rate_at(0, t0));
    let mut guard_violations = 0;
    let mut negative_clamps = 0;
    let total_steps = n_samples * per_sample;

    for k in 0..total_steps {
        let t = t0 + k as f64 * dt;
        // Midpoint lookup keeps boundary rounding out of the window choice.
        let u = influx.rates_at(t + 0.5 * dt);
        let k1 = rhs(&y, params, &u);
        let k2 = rhs(&axpy(&y, 0.5 * dt, &k1.values), params, &u);
        let k3 = rhs(&axpy(&y, 0.5 * dt, &k2.values), params, &u);
        let k4 = rhs(&axpy(&y, dt, &k3.values), params, &u);
        if k1.gate_clamped || k2.gate_clamped || k3.gate_clamped || k4.gate_clamped {
            guard_violations += 1;
        }
        for j in 0..6 {
            y[j] += dt / 6.0 * (k1.values[j] + 2.0 * k2.values[j] + 2.0 * k3.values[j] + k4.values[j]);
        }
        let t_next = t0 + (k + 1) as f64 * dt;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { t: t_next });
        }
        for v in y.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
                negative_clamps += 1;
            }
        }
        if (k + 1) % per_sample == 0 {
            let ts = t0 + ((k + 1) / per_sample) as f64 * dt_sample;
            rows.push(ChemState::from_array(ts, y));
            influx1.push(influx.channel_rate_at(0, ts));
        }
    }

    Ok(ChemTrace { dt_sample, rows, influx1, guard_violations, negative_clamps })
}

#[inline]
fn axpy(y: &[f64; 6], a: f64, x: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| y[i] + a * x[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> ReactorParams {
        ReactorParams::default()
    }

    #[test]
    fn empty_reactor_is_a_fixed_point() {
        let r = derivatives(&ChemState::zero(), &defaults(), [0.0; 3]).unwrap();
        assert_eq!(r.values, [0.0; 6]);
        assert!(!r.gate_clamped);
    }

    #[test]
    fn influx_into_empty_reactor() {
        // 5.45e-6 nmol/s / 7.54 nL = 7.2281e-7 nmol/nL/s = 722.81 nM/s
        // (nmol/s) / nL = (1e-9 mol/s) / (1e-9 L) = mol/L/s, then 1e9 nM per M
        let molar_per_s = (5.45e-6 * 1e-9) / (7.54 * 1e-9);
        let expected = molar_per_s * 1e9;
        let r = derivatives(&ChemState::zero(), &defaults(), [BASE_INFLUX; 3]).unwrap();
        for i in 0..3 {
            assert_eq!(r.values[i], 0.0);
            assert!((r.values[3 + i] - 722.81).abs() < 5e-3, "{}", r.values[3 + i]);
            assert!((r.values[3 + i] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn product_decays_by_dilution() {
        let s = ChemState { t: 0.0, products: [1000.0, 0.0, 0.0], substrates: [0.0; 3] };
        let r = derivatives(&s, &defaults(), [0.0; 3]).unwrap();
        assert!((r.values[0] + 11.771).abs() < 1e-3, "{}", r.values[0]);
        assert_eq!(r.values[1], 0.0);
        assert_eq!(r.values[2], 0.0);
    }

    #[test]
    fn inhibition_ring_direction() {
        // P3 saturating gate 1 shuts off S1 cleavage only.
        let s = ChemState { t: 0.0, products: [0.0, 0.0, 2500.0], substrates: [1e4; 3] };
        let r = derivatives(&s, &defaults(), [0.0; 3]).unwrap();
        assert_eq!(r.values[0], 0.0);
        assert!(r.values[1] > 0.0);
        assert!(!r.gate_clamped);
    }

    #[test]
    fn gate_clamp_is_reported() {
        let s = ChemState { t: 0.0, products: [3000.0, 0.0, 0.0], substrates: [1e4; 3] };
        let r = derivatives(&s, &defaults(), [0.0; 3]).unwrap();
        assert!(r.gate_clamped);
        // gate 2 is fully blocked, P2 only dilutes
        assert_eq!(r.values[1], 0.0);
    }

    #[test]
    fn non_finite_input_names_field() {
        let mut s = ChemState::zero();
        s.substrates[1] = f64::NAN;
        let err = derivatives(&s, &defaults(), [0.0; 3]).unwrap_err();
        assert!(err.to_string().contains("`S`"), "{err}");
        let err = derivatives(&ChemState::zero(), &defaults(), [0.0, f64::INFINITY, 0.0]).unwrap_err();
        assert!(err.to_string().contains("influx"));
    }

    #[test]
    fn params_validation() {
        assert!(defaults().validate().is_ok());
        let mut p = defaults();
        p.mixed_fraction = 1.5;
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "h", .. })));
        let mut p = defaults();
        p.gates[2] = 0.0;
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "G", .. })));
        let mut p = defaults();
        p.efflux = 0.0;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn influx_profile_lookup() {
        let p = InfluxProfile {
            base: [2.0; 3],
            hold_time: 100.0,
            start_time: 500.0,
            values: vec![0.25, 0.5, 1.0],
            channel: 0,
        };
        assert_eq!(p.channel_rate_at(0, 499.99), 2.0);
        assert_eq!(p.channel_rate_at(0, 500.0), 0.5);
        assert_eq!(p.channel_rate_at(0, 599.999), 0.5);
        assert_eq!(p.channel_rate_at(0, 600.0), 1.0);
        assert_eq!(p.channel_rate_at(0, 799.0), 2.0);
        assert_eq!(p.channel_rate_at(0, 800.0), 2.0);
        assert_eq!(p.channel_rate_at(1, 650.0), 2.0);
        assert_eq!(p.end_time(), 800.0);
    }

    #[test]
    fn zero_influx_zero_state_stays_zero() {
        let trace = integrate(
            &ChemState::zero(),
            &defaults(),
            &InfluxProfile::constant([0.0; 3]),
            200.0,
            StepConfig::default(),
        )
        .unwrap();
        assert_eq!(trace.len(), 201);
        assert!(trace.rows.iter().all(|r| r.products == [0.0; 3] && r.substrates == [0.0; 3]));
    }

    #[test]
    fn sample_grid_spacing() {
        let trace = integrate(
            &ChemState::default(),
            &defaults(),
            &InfluxProfile::constant([BASE_INFLUX; 3]),
            100.0,
            StepConfig { dt: 0.05, dt_sample: 2.0 },
        )
        .unwrap();
        assert_eq!(trace.len(), 51);
        for (k, r) in trace.rows.iter().enumerate() {
            assert!((r.t - 2.0 * k as f64).abs() < 1e-9);
        }
        assert_eq!(trace.index_of(40.0), Some(20));
        assert_eq!(trace.index_of(41.0), None);
    }

    #[test]
    fn misaligned_schedule_is_rejected() {
        let p = InfluxProfile {
            base: [BASE_INFLUX; 3],
            hold_time: 100.03,
            start_time: 10.0,
            values: vec![0.5; 3],
            channel: 0,
        };
        let err = integrate(&ChemState::default(), &defaults(), &p, 100.0, StepConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Misaligned(_)));
        let err = integrate(
            &ChemState::default(),
            &defaults(),
            &InfluxProfile::constant([0.0; 3]),
            100.0,
            StepConfig { dt: 0.05, dt_sample: 0.07 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Misaligned(_)));
    }

    #[test]
    fn huge_step_reports_divergence() {
        // e/V ≈ 13 s⁻¹ with dt = 10 s is far outside the RK4 stability region
        let mut params = defaults();
        params.efflux = 100.0;
        let err = integrate(
            &ChemState::default(),
            &params,
            &InfluxProfile::constant([BASE_INFLUX; 3]),
            1000.0,
            StepConfig { dt: 10.0, dt_sample: 10.0 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Diverged { .. }), "{err}");
    }
}
