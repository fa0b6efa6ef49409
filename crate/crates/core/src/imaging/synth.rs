use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linop::{DenseVector, Shape};

/// Number of sinusoidal layers in [`synthetic_texture`].
const LAYERS: usize = 8;

/// Stripe periods range over `[size / PERIOD_DIV.0, size / PERIOD_DIV.1)`.
const PERIOD_DIV: (f64, f64) = (14.0, 5.0);

/// Deterministic piecewise-constant texture in `[0, 1]`.
///
/// Each layer is a plane wave `sin(2π <f, p> + φ)` with a random direction,
/// period and phase, thresholded to a two-level stripe pattern; the layers are
/// summed with random weights and rescaled to `[0.1, 0.9]`.
pub fn synthetic_texture(shape: Shape, seed: u64) -> Result<DenseVector> {
    if shape.planes != 1 || shape.rows < 2 || shape.cols < 2 {
        return Err(Error::InvalidParameter(format!("texture needs an image of at least 2x2, got {shape:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = shape.rows.min(shape.cols) as f64;
    let layers: Vec<(f64, f64, f64, f64, f64)> = (0..LAYERS)
        .map(|_| {
            let angle = rng.random_range(0.0..PI);
            let period = rng.random_range(size / PERIOD_DIV.0..size / PERIOD_DIV.1);
            let phase = rng.random_range(0.0..2.0 * PI);
            let level = rng.random_range(-0.3..0.3);
            let weight = rng.random_range(0.5..1.0);
            (angle.cos() / period, angle.sin() / period, phase, level, weight)
        })
        .collect();

    let mut x = DenseVector::zeros(shape);
    let n = shape.cols;
    for (k, v) in x.data_mut().iter_mut().enumerate() {
        let (i, j) = ((k / n) as f64, (k % n) as f64);
        *v = layers
            .iter()
            .map(|&(fi, fj, phase, level, weight)| {
                let s = (2.0 * PI * (fi * i + fj * j) + phase).sin();
                if s > level {
                    weight
                } else {
                    0.0
                }
            })
            .sum();
    }
    let (lo, hi) = x.data().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    Ok(x.map(|v| (0.1 + 0.8 * (v - lo) / span).clamp(0.1, 0.9)))
}
