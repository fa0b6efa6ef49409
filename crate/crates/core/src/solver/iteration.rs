//! One step of the double-proximal iteration
//!
//! ```text
//! x_{n+1} = Prox_{γ_n g}(x_n + γ_n K* y_n - γ_n ∇φ(x_n))
//! y_{n+1} = Prox_{μ_n h*}(y_n + μ_n K x_{n+1})
//! ```
//!
//! and the certificates that come with it.

use super::problem::{check_pair, pd_energy, DcProblem};
use crate::error::{Error, Result};
use crate::funcs::ProxOptions;
use crate::linop::{inner, DenseVector};

/// Relative slack on every energy comparison: `1e-10 * (1 + |Φ|)`.
pub const ENERGY_SLACK: f64 = 1e-10;

/// How many times an inexact `g`-prox is re-solved with a 100x tighter
/// tolerance when the x-half-step misses its descent inequality.
const MAX_REFINEMENTS: usize = 4;

pub(crate) fn slack(phi: f64) -> f64 {
    ENERGY_SLACK * (1.0 + phi.abs())
}

/// Which energy inequalities `dc_step` enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CertificateMode {
    /// Record only.
    Off,
    /// `Φ(x+, y+) <= Φ(x+, y) <= Φ(x, y)` whenever `γ <= 2β`.
    #[default]
    Descent,
    /// Descent plus the two gap inequalities
    /// `Φ(x+, y) - Φ(x, y) <= (1/(2β) - 1/γ) dx²` and
    /// `Φ(x+, y+) - Φ(x+, y) <= -(1/μ) dy²`.
    Full,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub n: usize,
    pub x: DenseVector,
    pub y: DenseVector,
    /// `Φ(x_n, y_n)`.
    pub phi_val: f64,
    /// `||x_{n-1} - x_n||` (0 at n = 0).
    pub dx: f64,
    /// `||y_{n-1} - y_n||` (0 at n = 0).
    pub dy: f64,
    /// `||(x*_n, y*_n)||` of the constructed subgradient (0 at n = 0).
    pub residual: f64,
    pub x_star_norm: f64,
    pub y_star_norm: f64,
    /// `∇φ(x_n)`, reused by the next step and the next residual.
    pub grad: DenseVector,
    /// Dual variable of the last inexact `g`-prox, for warm starts.
    pub g_dual: Option<DenseVector>,
}

impl SolverState {
    /// State at `n = 0`; fails with [`Error::InvalidStart`] if `Φ(x0, y0) = +inf`.
    pub fn initial(p: &DcProblem, x0: DenseVector, y0: DenseVector) -> Result<Self> {
        check_pair(p, &x0, &y0)?;
        let phi_val = pd_energy(p, &x0, &y0)?;
        if !phi_val.is_finite() {
            return Err(Error::InvalidStart);
        }
        let grad = p.phi.gradient(&x0);
        Ok(SolverState {
            n: 0,
            x: x0,
            y: y0,
            phi_val,
            dx: 0.0,
            dy: 0.0,
            residual: 0.0,
            x_star_norm: 0.0,
            y_star_norm: 0.0,
            grad,
            g_dual: None,
        })
    }
}

/// Side information of one step.
#[derive(Debug, Clone)]
pub struct StepInfo {
    /// `Φ(x_{n+1}, y_n)`.
    pub phi_mid: f64,
    pub inner_iters: usize,
    /// Times the `g`-prox was re-solved more tightly.
    pub refinements: usize,
    /// The inner solver hit its cap with a large gap.
    pub inner_warning: bool,
}

/// Norms of the explicit subgradient `(x*_n, y*_n) ∈ ∂Φ(x_n, y_n)` built from two
/// consecutive iterates:
///
/// ```text
/// x*_n = (x_{n-1} - x_n)/γ + ∇φ(x_n) - ∇φ(x_{n-1}) + K*(y_{n-1} - y_n)
/// y*_n = (y_{n-1} - y_n)/μ
/// ```
///
/// where `γ, μ` are the step sizes that produced `cur` from `prev`.
pub fn criticality_residual(
    p: &DcProblem,
    prev: &SolverState,
    cur: &SolverState,
    gamma: f64,
    mu: f64,
) -> Result<(f64, f64)> {
    if cur.n == 0 {
        return Err(Error::NotAvailable);
    }
    let dxv = prev.x.sub(&cur.x)?;
    let dyv = prev.y.sub(&cur.y)?;
    Ok(residual_parts(p, &dxv, &dyv, &prev.grad, &cur.grad, gamma, mu))
}

fn residual_parts(
    p: &DcProblem,
    dxv: &DenseVector,
    dyv: &DenseVector,
    grad_prev: &DenseVector,
    grad_cur: &DenseVector,
    gamma: f64,
    mu: f64,
) -> (f64, f64) {
    let mut xs = dxv.scaled(1.0 / gamma);
    for ((v, gc), gp) in xs.data_mut().iter_mut().zip(grad_cur.data()).zip(grad_prev.data()) {
        *v += gc - gp;
    }
    let kt = p.k.apply_adjoint(dyv);
    for (v, k) in xs.data_mut().iter_mut().zip(kt.data()) {
        *v += k;
    }
    (xs.norm(), dyv.norm() / mu)
}

/// Advance `s` by one iteration with step sizes `gamma`, `mu`.
pub fn dc_step(
    p: &DcProblem,
    s: &SolverState,
    gamma: f64,
    mu: f64,
    mode: CertificateMode,
) -> Result<(SolverState, StepInfo)> {
    if !(gamma > 0.0 && mu > 0.0) {
        return Err(Error::InvalidParameter(format!("step sizes must be > 0, got gamma={gamma}, mu={mu}")));
    }
    let beta = p.beta();
    let step = s.n + 1;

    // forward point for the primal prox
    let mut w = s.x.clone();
    w.axpy(gamma, &p.k.apply_adjoint(&s.y))?;
    w.axpy(-gamma, &s.grad)?;

    let hc_y = p.h_conj.value(&s.y);
    let x_gap_coeff = 1.0 / (2.0 * beta) - 1.0 / gamma;

    let mut warm = s.g_dual.clone();
    let mut scale = 1.0;
    let mut refinements = 0;
    let mut inner_iters = 0;
    let (x1, g_dual, inner_warning, kx1, smooth_part, phi_mid, dxv) = loop {
        let out = p.g.prox_with(
            gamma,
            &w,
            &ProxOptions {
                warm_start: warm.as_ref(),
                tolerance_scale: scale,
            },
        );
        inner_iters += out.inner_iters;
        let x1 = out.point;
        let kx1 = p.k.apply(&x1);
        let smooth_part = p.g.value(&x1) + p.phi.value(&x1);
        let phi_mid = smooth_part + hc_y - inner(&s.y, &kx1)?;
        let dxv = s.x.sub(&x1)?;
        let bound = s.phi_val + x_gap_coeff * dxv.norm_sq() + slack(s.phi_val);
        if phi_mid <= bound || p.g.is_exact() || refinements == MAX_REFINEMENTS {
            break (x1, out.dual, !out.converged, kx1, smooth_part, phi_mid, dxv);
        }
        refinements += 1;
        scale *= 1e-2;
        warm = out.dual.or(warm);
    };

    let mut v = s.y.clone();
    v.axpy(mu, &kx1)?;
    let y1 = p.h_conj.prox(mu, &v);
    let dyv = s.y.sub(&y1)?;
    let phi1 = smooth_part + p.h_conj.value(&y1) - inner(&y1, &kx1)?;

    let dx = dxv.norm();
    let dy = dyv.norm();
    let check = |stage: &'static str, before: f64, after: f64, allowed: f64| -> Result<()> {
        if after > before + allowed {
            Err(Error::DescentViolation { step, stage, before, after, allowed })
        } else {
            Ok(())
        }
    };
    match mode {
        CertificateMode::Off => {}
        CertificateMode::Descent | CertificateMode::Full => {
            if gamma <= 2.0 * beta {
                check("x-update", s.phi_val, phi_mid, slack(s.phi_val))?;
                check("y-update", phi_mid, phi1, slack(phi_mid))?;
            }
            if mode == CertificateMode::Full {
                check("x-gap", s.phi_val, phi_mid, x_gap_coeff * dx * dx + slack(s.phi_val))?;
                check("y-gap", phi_mid, phi1, -dy * dy / mu + slack(phi_mid))?;
            }
        }
    }

    let grad1 = p.phi.gradient(&x1);
    let (xs, ys) = residual_parts(p, &dxv, &dyv, &s.grad, &grad1, gamma, mu);
    let next = SolverState {
        n: step,
        x: x1,
        y: y1,
        phi_val: phi1,
        dx,
        dy,
        residual: xs.hypot(ys),
        x_star_norm: xs,
        y_star_norm: ys,
        grad: grad1,
        g_dual: g_dual.or(warm),
    };
    Ok((
        next,
        StepInfo {
            phi_mid,
            inner_iters,
            refinements,
            inner_warning,
        },
    ))
}
