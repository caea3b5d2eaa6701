//! Linear readout `y = w·x + w_b` trained by least squares.
//!
//! The minimizer of `‖X′w′ − y‖² + ridge·‖w′‖²` is computed from an SVD of
//! `X′` (stacked with `√ridge·I` when regularized). When `X′ᵀX′` is
//! invertible and `ridge = 0` this is the pseudoinverse solution
//! `(X′ᵀX′)⁻¹X′ᵀy`; when it is not, the minimum-norm minimizer is returned.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::design::{DesignMatrix, ReadoutMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutWeights {
    pub w: Vec<f64>,
    pub w_b: f64,
}

impl ReadoutWeights {
    pub fn zeros(channels: usize) -> Self {
        Self { w: vec![0.0; channels], w_b: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.w_b.is_finite() && self.w.iter().all(|v| v.is_finite())
    }

    fn from_extended(v: &DVector<f64>) -> Self {
        let c = v.len() - 1;
        Self { w: v.rows(0, c).iter().copied().collect(), w_b: v[c] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrainOptions {
    pub ridge: f64,
    /// Penalize the bias weight as well.
    pub ridge_bias: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedReadout {
    pub weights: ReadoutWeights,
    /// Numerical rank of the (possibly regularized) system.
    pub rank: usize,
    pub full_rank: bool,
}

/// Serialized form of a trained readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutRecord {
    pub w: Vec<f64>,
    pub w_b: f64,
    pub mode: ReadoutMode,
    pub ridge: f64,
}

impl ReadoutRecord {
    pub fn new(weights: &ReadoutWeights, mode: ReadoutMode, ridge: f64) -> Self {
        Self { w: weights.w.clone(), w_b: weights.w_b, mode, ridge }
    }

    pub fn weights(&self) -> ReadoutWeights {
        ReadoutWeights { w: self.w.clone(), w_b: self.w_b }
    }
}

pub fn train_readout(x: &DesignMatrix, y: &[f64], opts: TrainOptions) -> Result<TrainedReadout> {
    let n = x.rows();
    if y.len() != n {
        return Err(Error::Dimension { expected: n, actual: y.len() });
    }
    if !(opts.ridge >= 0.0) || !opts.ridge.is_finite() {
        return Err(Error::InvalidParam { name: "ridge", reason: "must be finite and >= 0".into() });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "y" });
    }
    if x.x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { field: "X" });
    }
    let p = x.x.ncols();
    let (a, b) = if opts.ridge > 0.0 {
        let pen = if opts.ridge_bias { p } else { p - 1 };
        let mut a = DMatrix::zeros(n + pen, p);
        a.view_mut((0, 0), (n, p)).copy_from(&x.x);
        let s = opts.ridge.sqrt();
        for j in 0..pen {
            a[(n + j, j)] = s;
        }
        let mut b = DVector::zeros(n + pen);
        b.rows_mut(0, n).copy_from_slice(y);
        (a, b)
    } else {
        (x.x.clone(), DVector::from_column_slice(y))
    };
    let (sol, rank) = lstsq_svd(a, &b);
    let weights = ReadoutWeights::from_extended(&sol);
    if !weights.is_finite() {
        return Err(Error::NonFinite { field: "weights" });
    }
    Ok(TrainedReadout { weights, rank, full_rank: rank == p })
}

/// Minimum-norm least-squares solution and numerical rank.
fn lstsq_svd(a: DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, usize) {
    let (m, n) = a.shape();
    let svd = a.svd(true, true);
    let u = svd.u.as_ref().expect("U requested");
    let v_t = svd.v_t.as_ref().expect("Vᵀ requested");
    let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let tol = m.max(n) as f64 * f64::EPSILON * s_max;
    let mut coef = DVector::zeros(svd.singular_values.len());
    let mut rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > tol {
            coef[i] = u.column(i).dot(b) / s;
            rank += 1;
        }
    }
    (v_t.transpose() * coef, rank)
}

/// Row-wise `w·x + w_b`.
pub fn predict(w: &ReadoutWeights, x: &DesignMatrix) -> Result<Vec<f64>> {
    if w.w.len() != x.channels() {
        return Err(Error::Dimension { expected: x.channels(), actual: w.w.len() });
    }
    Ok(x.x
        .row_iter()
        .map(|row| w.w.iter().zip(row.iter()).map(|(a, b)| a * b).sum::<f64>() + w.w_b)
        .collect())
}
