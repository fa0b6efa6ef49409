use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::blur::{BlurSpec, GaussianBlur};
use crate::error::{Error, Result};
use crate::linop::{DenseVector, LinearMap};

/// Improvement in SNR, `10 log10(||x - b||² / ||x - x_k||²)`.
///
/// Returns `+inf` when `restored == original`.
pub fn isnr(original: &DenseVector, observed: &DenseVector, restored: &DenseVector) -> Result<f64> {
    let num = original.dist(observed)?.powi(2);
    let den = original.dist(restored)?.powi(2);
    if den == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (num / den).log10())
}

/// Round to the nearest multiple of 1/255.
pub fn quantize_255(v: f64) -> f64 {
    (v * 255.0).round() / 255.0
}

/// Intermediate stages of [`degrade`].
#[derive(Debug, Clone)]
pub struct Degraded {
    /// `L x`.
    pub blurred: DenseVector,
    /// `L x + ν`, before clamping.
    pub noisy: DenseVector,
    /// Clamped to `[0, 1]` and quantized to multiples of 1/255.
    pub observed: DenseVector,
}

pub fn degrade_detailed(original: &DenseVector, spec: &BlurSpec, noise_std: f64, seed: u64) -> Result<Degraded> {
    let blur = GaussianBlur::new(*spec, original.shape())?;
    degrade_with(original, &blur, noise_std, seed)
}

/// Same as [`degrade_detailed`] with an arbitrary blur operator.
pub fn degrade_with(original: &DenseVector, blur: &dyn LinearMap, noise_std: f64, seed: u64) -> Result<Degraded> {
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise std must be >= 0, got {noise_std}")));
    }
    let blurred = blur.forward(original)?;
    let mut noisy = blurred.clone();
    if noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        // fixed pixel order keeps the realization independent of threading
        for v in noisy.data_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    let observed = noisy.map(|v| quantize_255(v.clamp(0.0, 1.0)));
    Ok(Degraded {
        blurred,
        noisy,
        observed,
    })
}

/// `b = round_255(clamp_[0,1](L x + ν))` with `ν ~ N(0, noise_std²)` drawn from `seed`.
pub fn degrade(original: &DenseVector, spec: &BlurSpec, noise_std: f64, seed: u64) -> Result<DenseVector> {
    Ok(degrade_detailed(original, spec, noise_std, seed)?.observed)
}
