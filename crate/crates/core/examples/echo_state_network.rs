//! Software echo-state reservoir on the same delayed-sum task, for comparison
//! with the chemical reservoir.

use molres::rc::{esn_step, predict, spectral_radius, train_readout, DesignMatrix, EsnParams, TrainOptions};
use molres::tasks::{nrmse, Normalizer};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HOLD: usize = 10;

fn main() -> molres::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let esn = EsnParams::random(100, 1, 1, 0.0, 0.1, 0.9, &mut rng)?;
    println!("spectral radius {:.4}", spectral_radius(&esn.w_res)?);

    // Held uniform inputs; target u(t − HOLD) + 0.5·u(t − 1.5·HOLD).
    let n = 4000;
    let u: Vec<f64> = (0..n / HOLD).flat_map(|_| std::iter::repeat_n(rng.random::<f64>(), HOLD)).collect();
    let mut x = DVector::zeros(esn.size());
    let mut states = Vec::with_capacity(n);
    for &v in &u {
        x = esn_step(&esn, &x, &DVector::from_element(1, v))?;
        states.push(x.iter().copied().collect::<Vec<f64>>());
    }
    let lag = HOLD + HOLD / 2;
    let y: Vec<f64> = (lag..n).map(|t| u[t - HOLD] + 0.5 * u[t - lag]).collect();

    let split = n / 2;
    let window = |from: usize, to: usize| {
        DesignMatrix::from_rows((from..to).map(|t| t as f64).collect(), &states[from..to])
    };
    let train = window(lag.max(200), split)?;
    let test = window(split, n)?;
    let y_train = &y[lag.max(200) - lag..split - lag];
    let y_test = &y[split - lag..];

    for ridge in [0.0, 1e-6, 1e-3] {
        let fit = train_readout(&train, y_train, TrainOptions { ridge, ridge_bias: false })?;
        let out = predict(&fit.weights, &test)?;
        println!("ridge {ridge:e}: test NRMSE {:.4}", nrmse(y_test, &out, Normalizer::TargetRange)?);
    }
    Ok(())
}
