//! Random piecewise-constant input signals.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::reactor::InfluxProfile;

/// Stream used for the input multipliers of a trial.
pub const INPUT_STREAM: u64 = 0;
/// Stream used for untrained random readout weights.
pub const READOUT_STREAM: u64 = 1;

/// Generator for `seed` on an independent ChaCha stream.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index.wrapping_add(1 << 32));
    rng.next_u64()
}

/// Channel-1 influx fluctuating as `base · R_k`, `R_k ~ U[0, 1)` i.i.d., one value per `tau` window.
///
/// Covers `[start, end)` with `ceil((end − start)/tau)` windows.
pub fn generate_input(seed: u64, base: f64, tau: f64, start: f64, end: f64) -> Result<InfluxProfile> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParam { name: "tau", reason: "must be > 0".into() });
    }
    if !(end > start) {
        return Err(Error::InvalidParam { name: "end", reason: "must exceed start".into() });
    }
    if !(base >= 0.0) || !base.is_finite() {
        return Err(Error::InvalidParam { name: "influx_base", reason: "must be finite and >= 0".into() });
    }
    let n = ((end - start) / tau - 1e-9).ceil().max(1.0) as usize;
    let mut rng = stream_rng(seed, INPUT_STREAM);
    let values = (0..n).map(|_| rng.random::<f64>()).collect();
    Ok(InfluxProfile { base: [base; 3], hold_time: tau, start_time: start, values, channel: 0 })
}
