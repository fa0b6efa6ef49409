use crate::error::{Error, Result};

/// Brute-force scalar prox: the grid point `t` in `[z - radius, z + radius]`
/// minimizing `γ f(t) + (t - z)²/2`, ties going to the smaller `|t|`.
///
/// Used as an independent oracle for the closed-form scalar proxes.
pub fn prox_brute_oracle(
    f: impl Fn(f64) -> f64,
    gamma: f64,
    z: f64,
    grid_radius: f64,
    grid_step: f64,
) -> Result<f64> {
    if !(grid_step > 0.0) || !(grid_radius >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "grid needs step > 0 and radius >= 0, got step={grid_step}, radius={grid_radius}"
        )));
    }
    let half = (grid_radius / grid_step).round() as i64;
    let mut best: Option<(f64, f64)> = None;
    for k in -half..=half {
        let t = z + k as f64 * grid_step;
        let obj = gamma * f(t) + 0.5 * (t - z) * (t - z);
        if !obj.is_finite() {
            continue;
        }
        best = match best {
            None => Some((t, obj)),
            Some((bt, bo)) if obj < bo || (obj == bo && t.abs() < bt.abs()) => Some((t, obj)),
            keep => keep,
        };
    }
    best.map(|(t, _)| t).ok_or(Error::NoMinimizer)
}
