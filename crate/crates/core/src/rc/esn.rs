//! Reference echo-state reservoir `x′ = f(W_res·x + W_in·u)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Tanh,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, v: f64) -> f64 {
        match self {
            Activation::Tanh => v.tanh(),
            Activation::Identity => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsnParams {
    /// `N × I`
    pub w_in: DMatrix<f64>,
    /// `N × N`, rescaled to `spectral_target`.
    pub w_res: DMatrix<f64>,
    pub outputs: usize,
    pub activation: Activation,
    pub mu: f64,
    pub sigma: f64,
    pub spectral_target: f64,
}

impl EsnParams {
    /// Draws `W_in` and `W_res` i.i.d. normal(`mu`, `sigma`) and rescales `W_res`.
    pub fn random<R: Rng + ?Sized>(
        size: usize,
        inputs: usize,
        outputs: usize,
        mu: f64,
        sigma: f64,
        spectral_target: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let normal = Normal::new(mu, sigma)
            .map_err(|e| Error::InvalidParam { name: "sigma", reason: e.to_string() })?;
        let w_in = DMatrix::from_fn(size, inputs, |_, _| normal.sample(rng));
        let raw = DMatrix::from_fn(size, size, |_, _| normal.sample(rng));
        let w_res = scale_spectral_radius(&raw, spectral_target)?;
        Ok(Self { w_in, w_res, outputs, activation: Activation::Tanh, mu, sigma, spectral_target })
    }

    pub fn size(&self) -> usize {
        self.w_res.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.w_in.ncols()
    }

    pub fn step(&self, x: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
        esn_step(self, x, u)
    }
}

pub fn esn_step(params: &EsnParams, x: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != params.size() {
        return Err(Error::Dimension { expected: params.size(), actual: x.len() });
    }
    if u.len() != params.inputs() {
        return Err(Error::Dimension { expected: params.inputs(), actual: u.len() });
    }
    let mut pre = &params.w_res * x;
    pre.gemv(1.0, &params.w_in, u, 1.0);
    Ok(pre.map(|v| params.activation.apply(v)))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(w: &DMatrix<f64>) -> Result<f64> {
    if !w.is_square() {
        return Err(Error::Dimension { expected: w.nrows(), actual: w.ncols() });
    }
    if w.is_empty() {
        return Ok(0.0);
    }
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "W" });
    }
    Ok(w.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `(target / ρ(W))·W`.
pub fn scale_spectral_radius(w: &DMatrix<f64>, target: f64) -> Result<DMatrix<f64>> {
    if !(target >= 0.0) || !target.is_finite() {
        return Err(Error::InvalidParam { name: "spectral_target", reason: "must be finite and >= 0".into() });
    }
    let rho = spectral_radius(w)?;
    if rho == 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    Ok(w * (target / rho))
}
