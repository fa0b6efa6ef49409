//! Prox of the anisotropic total variation `w ||D x||_1`.
//!
//! There is no closed form, so the prox problem
//!
//! ```text
//! min_x  1/(2γ) ||x - b||² + ||D x||_1
//! ```
//!
//! is solved through its dual `min { γ/2 ||D* p||² - <b, D* p> : ||p||_∞ <= 1 }`
//! with projected gradient steps, and the primal point is recovered as
//! `x = b - γ D* p`. The duality gap `||Dx||_1 - <p, Dx>` certifies the result.

use std::sync::Arc;

use super::{ProxOptions, ProxOutcome, ProximableFunction};
use crate::error::{Error, Result};
use crate::linop::{inner, DenseVector, LinearMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvSettings {
    /// Stop once the dual iterate moves less than this in the sup norm.
    pub inner_tol: f64,
    pub max_inner: usize,
    /// Start each solve from the previous dual variable.
    pub warm_start: bool,
}

impl Default for TvSettings {
    fn default() -> Self {
        TvSettings {
            inner_tol: 1e-4,
            max_inner: 500,
            warm_start: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TvProx {
    pub x: DenseVector,
    pub dual: DenseVector,
    pub gap: f64,
    pub iters: usize,
    /// The dual change fell below the tolerance.
    pub converged: bool,
    /// Iteration cap reached with a gap above `100 * inner_tol`.
    pub warning: bool,
}

/// Objective `1/(2γ) ||x - b||² + ||D x||_1` of the prox problem.
pub fn aniso_tv_objective(gamma: f64, b: &DenseVector, x: &DenseVector, op: &dyn LinearMap) -> Result<f64> {
    let fit = x.dist(b)?;
    Ok(fit * fit / (2.0 * gamma) + op.forward(x)?.norm_l1())
}

pub fn prox_aniso_tv(
    gamma: f64,
    b: &DenseVector,
    op: &dyn LinearMap,
    inner_tol: f64,
    max_inner: usize,
) -> Result<TvProx> {
    prox_aniso_tv_warm(gamma, b, op, inner_tol, max_inner, None)
}

pub fn prox_aniso_tv_warm(
    gamma: f64,
    b: &DenseVector,
    op: &dyn LinearMap,
    inner_tol: f64,
    max_inner: usize,
    warm: Option<&DenseVector>,
) -> Result<TvProx> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("prox parameter must be > 0, got {gamma}")));
    }
    if !(inner_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("inner tolerance must be > 0, got {inner_tol}")));
    }
    b.check_shape(op.domain())?;
    let mut p = match warm {
        Some(w) => {
            w.check_shape(op.codomain())?;
            w.map(|v| v.clamp(-1.0, 1.0))
        }
        None => DenseVector::zeros(op.codomain()),
    };
    let l = op.norm_bound();
    let tau = 1.0 / (gamma * l * l);

    let mut iters = 0;
    let mut converged = false;
    let mut x = b.clone();
    x.axpy(-gamma, &op.apply_adjoint(&p))?;
    while iters < max_inner {
        iters += 1;
        // gradient of the dual objective is D(γ D* p - b) = -D x
        let dx = op.apply(&x);
        let mut change: f64 = 0.0;
        for (pi, gi) in p.data_mut().iter_mut().zip(dx.data()) {
            let next = (*pi + tau * gi).clamp(-1.0, 1.0);
            change = change.max((next - *pi).abs());
            *pi = next;
        }
        x = b.clone();
        x.axpy(-gamma, &op.apply_adjoint(&p))?;
        if change < inner_tol {
            converged = true;
            break;
        }
    }

    let dx = op.apply(&x);
    let gap = (dx.norm_l1() - inner(&p, &dx)?).max(0.0);
    let warning = !converged && gap > 1e2 * inner_tol;
    Ok(TvProx {
        x,
        dual: p,
        gap,
        iters,
        converged,
        warning,
    })
}

/// `weight * ||D x||_1` with its prox evaluated by the dual solver above.
pub struct AnisoTv {
    weight: f64,
    op: Arc<dyn LinearMap>,
    settings: TvSettings,
}

impl AnisoTv {
    pub fn new(weight: f64, op: Arc<dyn LinearMap>, settings: TvSettings) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter(format!("TV weight must be >= 0, got {weight}")));
        }
        if !(settings.inner_tol > 0.0) || settings.max_inner == 0 {
            return Err(Error::InvalidParameter("TV inner solver needs tol > 0 and max_inner >= 1".into()));
        }
        Ok(AnisoTv { weight, op, settings })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn settings(&self) -> TvSettings {
        self.settings
    }
}

impl ProximableFunction for AnisoTv {
    fn value(&self, x: &DenseVector) -> f64 {
        self.weight * self.op.apply(x).norm_l1()
    }

    fn prox_with(&self, gamma: f64, x: &DenseVector, opts: &ProxOptions<'_>) -> ProxOutcome {
        let scaled = gamma * self.weight;
        if scaled == 0.0 {
            return ProxOutcome::exact(x.clone());
        }
        let scale = opts.tolerance_scale.clamp(f64::MIN_POSITIVE, 1.0);
        let max_inner = if scale < 1.0 {
            self.settings.max_inner.saturating_mul(20)
        } else {
            self.settings.max_inner
        };
        let warm = if self.settings.warm_start { opts.warm_start } else { None };
        // shapes were checked when the problem was assembled
        let out = prox_aniso_tv_warm(scaled, x, self.op.as_ref(), self.settings.inner_tol * scale, max_inner, warm)
            .expect("TV prox called with inconsistent shapes");
        ProxOutcome {
            point: out.x,
            inner_iters: out.iters,
            converged: !out.warning,
            dual: Some(out.dual),
        }
    }

    fn is_exact(&self) -> bool {
        false
    }
}
