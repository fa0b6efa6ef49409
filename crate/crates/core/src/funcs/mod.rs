//! Convex function interfaces and the concrete prox zoo.
//!
//! Three roles show up in a difference-of-convex model:
//!
//! * [`ProximableFunction`]: a convex function with a computable prox
//!   (the convex part `g`, and the conjugate `h*` of the concave part);
//! * [`SmoothConvexFunction`]: a convex function with Lipschitz gradient (`φ`);
//! * [`SubdifferentiableFunction`]: the concave part `h` itself, needed only for
//!   reporting primal values and for picking a starting dual point in `∂h`.

use crate::linop::DenseVector;

mod basic;
mod crossnorm;
mod oracle;
mod scalar;
mod smooth;
mod tv;

pub use basic::{BoxIndicator, L1Norm, SquaredNorm, ZeroFunction};
pub use crossnorm::{cross_norm, prox_crossnorm_conj, CrossNorm, CrossNormBall};
pub use oracle::prox_brute_oracle;
pub use scalar::{
    prox_scad_conj, prox_scad_conj_scalar, prox_zhang_conj, prox_zhang_conj_scalar, scad_conj_scalar,
    scad_h_scalar, scad_h_value, scad_scalar, scad_value, zhang_conj_scalar, zhang_h_scalar,
    zhang_h_value, zhang_scalar, zhang_value, ScadConcave, ScadConj, ZhangConcave, ZhangConj,
};
pub use smooth::{make_data_term, DataTerm, ZeroSmooth};
pub use tv::{aniso_tv_objective, prox_aniso_tv, prox_aniso_tv_warm, AnisoTv, TvProx, TvSettings};

/// Knobs a caller may pass to an iterative prox.
#[derive(Debug, Clone, Copy)]
pub struct ProxOptions<'a> {
    /// Dual variable from a previous solve to start from.
    pub warm_start: Option<&'a DenseVector>,
    /// Multiplier on the inner stopping tolerance (1 = configured tolerance).
    pub tolerance_scale: f64,
}

impl Default for ProxOptions<'_> {
    fn default() -> Self {
        ProxOptions {
            warm_start: None,
            tolerance_scale: 1.0,
        }
    }
}

/// Result of a prox evaluation. Closed-form proxes report zero inner iterations.
#[derive(Debug, Clone)]
pub struct ProxOutcome {
    pub point: DenseVector,
    pub inner_iters: usize,
    /// False when an iterative prox hit its iteration cap with a large gap.
    pub converged: bool,
    /// Dual variable of an iterative prox, reusable as a warm start.
    pub dual: Option<DenseVector>,
}

impl ProxOutcome {
    pub fn exact(point: DenseVector) -> Self {
        ProxOutcome {
            point,
            inner_iters: 0,
            converged: true,
            dual: None,
        }
    }
}

/// Proper convex lsc function exposing its value and `Prox_{γ f}`.
pub trait ProximableFunction: Send + Sync {
    /// Function value; `f64::INFINITY` outside the domain.
    fn value(&self, x: &DenseVector) -> f64;

    fn prox_with(&self, gamma: f64, x: &DenseVector, opts: &ProxOptions<'_>) -> ProxOutcome;

    fn prox(&self, gamma: f64, x: &DenseVector) -> DenseVector {
        self.prox_with(gamma, x, &ProxOptions::default()).point
    }

    /// Whether `prox` is evaluated in closed form (no inner solver).
    fn is_exact(&self) -> bool {
        true
    }
}

/// Convex differentiable function whose gradient is `1/beta`-Lipschitz.
pub trait SmoothConvexFunction: Send + Sync {
    fn value(&self, x: &DenseVector) -> f64;
    fn gradient(&self, x: &DenseVector) -> DenseVector;
    /// Inverse Lipschitz modulus of the gradient; `INFINITY` for affine functions.
    fn beta(&self) -> f64;
}

/// Convex function with a selectable subgradient.
pub trait SubdifferentiableFunction: Send + Sync {
    fn value(&self, z: &DenseVector) -> f64;
    /// One element of `∂f(z)`; zero is chosen wherever zero is admissible
    /// and the subdifferential is multivalued.
    fn subgradient(&self, z: &DenseVector) -> DenseVector;
}

/// Parameters of the three sparsity penalties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    /// SCAD threshold λ.
    pub lambda: f64,
    /// SCAD shape `a > 1`.
    pub a_scad: f64,
    /// Zhang threshold `a > 0`.
    pub a_zhang: f64,
    /// LZOX weight on the cross norm.
    pub alpha: f64,
}

impl Default for PenaltyParams {
    fn default() -> Self {
        PenaltyParams {
            lambda: 1.0,
            a_scad: 3.7,
            a_zhang: 1.0,
            alpha: 0.0,
        }
    }
}

impl PenaltyParams {
    pub fn validate(&self) -> crate::Result<()> {
        use crate::Error::InvalidParameter;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(InvalidParameter(format!("SCAD lambda must be > 0, got {}", self.lambda)));
        }
        if !(self.a_scad > 1.0 && self.a_scad.is_finite()) {
            return Err(InvalidParameter(format!("SCAD a must be > 1, got {}", self.a_scad)));
        }
        if !(self.a_zhang > 0.0 && self.a_zhang.is_finite()) {
            return Err(InvalidParameter(format!("Zhang a must be > 0, got {}", self.a_zhang)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(InvalidParameter(format!("LZOX alpha must be >= 0, got {}", self.alpha)));
        }
        Ok(())
    }
}
