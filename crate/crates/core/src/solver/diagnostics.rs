//! Summability and rate diagnostics over a finished trajectory.

use super::trajectory::Trajectory;
use crate::error::{Error, Result};

/// Partial sums of squared iterate gaps and the bound they must respect.
#[derive(Debug, Clone, PartialEq)]
pub struct Summability {
    pub sum_dx2: f64,
    pub sum_dy2: f64,
    /// Running `sum (dx² + dy²)` after each record.
    pub partial_sums: Vec<f64>,
    /// Log-log slope of the gap norms over the second half of the run;
    /// `None` when fewer than two gaps there are positive.
    pub tail_slope: Option<f64>,
    /// `(Φ0 - Φ_N) / ε` with `ε = min(1/sup γ - 1/(2β), 1/sup μ)`, using the
    /// last recorded energy in place of `inf Φ`. `None` if `ε <= 0`.
    pub bound: Option<f64>,
}

impl Summability {
    /// Partial sums are nondecreasing and stay below `bound` (up to rounding).
    pub fn holds(&self) -> bool {
        let monotone = self.partial_sums.windows(2).all(|w| w[1] >= w[0]);
        let bounded = match (self.bound, self.partial_sums.last()) {
            (Some(b), Some(&s)) => s <= b * (1.0 + 1e-9) + 1e-12,
            _ => true,
        };
        monotone && bounded
    }
}

pub const MIN_RECORDS: usize = 10;

pub fn summability_report(t: &Trajectory) -> Result<Summability> {
    if t.records.len() < MIN_RECORDS {
        return Err(Error::TooShort {
            needed: MIN_RECORDS,
            have: t.records.len(),
        });
    }
    let mut sum_dx2 = 0.0;
    let mut sum_dy2 = 0.0;
    let mut partial_sums = Vec::with_capacity(t.records.len());
    for r in &t.records {
        sum_dx2 += r.dx * r.dx;
        sum_dy2 += r.dy * r.dy;
        partial_sums.push(sum_dx2 + sum_dy2);
    }

    let half = t.records.len() / 2;
    let tail: Vec<(f64, f64)> = t.records[half..]
        .iter()
        .filter(|r| r.gap() > 0.0)
        .map(|r| ((r.n as f64).ln(), r.gap().ln()))
        .collect();
    let tail_slope = if tail.len() >= 2 { Some(least_squares(&tail).0) } else { None };

    let s = &t.steps;
    let eps = (1.0 / s.gamma_sup - 1.0 / (2.0 * s.beta)).min(1.0 / s.mu_sup);
    let last_phi = t.records.last().map(|r| r.phi).unwrap_or(t.phi0);
    let bound = (eps > 0.0).then(|| (t.phi0 - last_phi) / eps);

    Ok(Summability {
        sum_dx2,
        sum_dy2,
        partial_sums,
        tail_slope,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The gaps hit exactly zero.
    Finite,
    /// `δ_n ≈ c q^n`.
    Linear,
    /// `δ_n ≈ c n^p`.
    Sublinear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub regime: Regime,
    /// `q` for the linear regime, the exponent `p` for the sublinear one, 0 if finite.
    pub rate: f64,
    /// Coefficient of determination of the chosen fit.
    pub r2: f64,
}

/// Classify the decay of the gap norms `sqrt(dx² + dy²)` over the last `window` records.
pub fn rate_fit(t: &Trajectory, window: usize) -> Result<RateFit> {
    let pts: Vec<(usize, f64)> = t.records.iter().map(|r| (r.n, r.gap())).collect();
    rate_fit_sequence(&pts, window)
}

/// Same as [`rate_fit`] on explicit `(n, δ_n)` pairs (`n >= 1`).
pub fn rate_fit_sequence(points: &[(usize, f64)], window: usize) -> Result<RateFit> {
    if window > points.len() {
        return Err(Error::TooShort {
            needed: window,
            have: points.len(),
        });
    }
    let window = window.max(1);
    let tail = &points[points.len() - window..];
    if tail.iter().any(|&(_, d)| d == 0.0) {
        return Ok(RateFit {
            regime: Regime::Finite,
            rate: 0.0,
            r2: 1.0,
        });
    }
    if tail.len() < 3 {
        return Err(Error::TooShort { needed: 3, have: tail.len() });
    }

    let lin: Vec<(f64, f64)> = tail.iter().map(|&(n, d)| (n as f64, d.ln())).collect();
    let log: Vec<(f64, f64)> = tail.iter().map(|&(n, d)| ((n as f64).ln(), d.ln())).collect();
    let (slope_lin, r2_lin) = least_squares(&lin);
    let (slope_log, r2_log) = least_squares(&log);
    Ok(if r2_lin >= r2_log {
        RateFit {
            regime: Regime::Linear,
            rate: slope_lin.exp(),
            r2: r2_lin,
        }
    } else {
        RateFit {
            regime: Regime::Sublinear,
            rate: slope_log,
            r2: r2_log,
        }
    })
}

/// Slope and r² of the least-squares line through `pts`.
fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, 0.0);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sequence_is_linear() {
        let pts: Vec<(usize, f64)> = (1..=40).map(|n| (n, 0.5f64.powi(n as i32))).collect();
        let fit = rate_fit_sequence(&pts, 30).unwrap();
        assert_eq!(fit.regime, Regime::Linear);
        assert!((fit.rate - 0.5).abs() < 1e-6, "{fit:?}");
    }

    #[test]
    fn power_sequence_is_sublinear() {
        let pts: Vec<(usize, f64)> = (1..=200).map(|n| (n, (n as f64).powi(-2))).collect();
        let fit = rate_fit_sequence(&pts, 150).unwrap();
        assert_eq!(fit.regime, Regime::Sublinear);
        assert!((fit.rate + 2.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn zeros_mean_finite() {
        let pts = vec![(1, 0.0), (2, 0.0), (3, 0.0)];
        assert_eq!(rate_fit_sequence(&pts, 3).unwrap().regime, Regime::Finite);
        let pts = vec![(1, 1.0), (2, 0.5), (3, 0.0), (4, 0.0)];
        assert_eq!(rate_fit_sequence(&pts, 4).unwrap().regime, Regime::Finite);
    }

    #[test]
    fn window_longer_than_run_is_an_error() {
        let pts = vec![(1, 1.0), (2, 0.5)];
        assert!(rate_fit_sequence(&pts, 5).is_err());
    }
}
