use std::fmt;
use std::sync::Arc;

use super::gradient::DiscreteGradient;
use crate::error::{Error, Result};
use crate::funcs::{
    make_data_term, AnisoTv, CrossNorm, CrossNormBall, PenaltyParams, ScadConcave, ScadConj, TvSettings,
    ZhangConcave, ZhangConj,
};
use crate::linop::{DenseVector, LinearMap};
use crate::solver::{DcProblem, StepSizes};

/// Regularizer `J(Dx)` written as `g(x) - h(Dx)` with `g` a weighted anisotropic TV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    /// `g = λ ||D·||_1`, `h = h_{λ,a}`.
    Scad { lambda: f64, a: f64 },
    /// `g = (1/a) ||D·||_1`, `h = h_a`.
    Zhang { a: f64 },
    /// `g = ||D·||_1`, `h = α ||·||_×`.
    Lzox { alpha: f64 },
}

impl Penalty {
    /// Short tag used in file names and tables.
    pub fn tag(&self) -> &'static str {
        match self {
            Penalty::Scad { .. } => "scad",
            Penalty::Zhang { .. } => "zhang",
            Penalty::Lzox { .. } => "lzox",
        }
    }

    /// The swept parameter: λ for SCAD, `a` for Zhang, α for LZOX.
    pub fn param(&self) -> f64 {
        match *self {
            Penalty::Scad { lambda, .. } => lambda,
            Penalty::Zhang { a } => a,
            Penalty::Lzox { alpha } => alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let defaults = PenaltyParams::default();
        match *self {
            Penalty::Scad { lambda, a } => PenaltyParams { lambda, a_scad: a, ..defaults }.validate(),
            Penalty::Zhang { a } => PenaltyParams { a_zhang: a, ..defaults }.validate(),
            Penalty::Lzox { alpha } => PenaltyParams { alpha, ..defaults }.validate(),
        }
    }

    /// Weight of `||D·||_1` in the convex part.
    pub fn tv_weight(&self) -> f64 {
        match *self {
            Penalty::Scad { lambda, .. } => lambda,
            Penalty::Zhang { a } => 1.0 / a,
            Penalty::Lzox { .. } => 1.0,
        }
    }
}

impl fmt::Display for Penalty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Penalty::Scad { lambda, a } => write!(f, "scad(lambda={lambda}, a={a})"),
            Penalty::Zhang { a } => write!(f, "zhang(a={a})"),
            Penalty::Lzox { alpha } => write!(f, "lzox(alpha={alpha})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub penalty: Penalty,
    /// Data weight μ in `(μ/2) ||Lx - b||²`.
    pub mu: f64,
    pub tv: TvSettings,
    /// Common value of γ and μ_n; `None` means `1 / (8 μ)`.
    pub step: Option<f64>,
}

impl ModelSpec {
    pub fn new(penalty: Penalty, mu: f64) -> Self {
        ModelSpec {
            penalty,
            mu,
            tv: TvSettings::default(),
            step: None,
        }
    }

    pub fn step_size(&self) -> f64 {
        self.step.unwrap_or(1.0 / (8.0 * self.mu))
    }

    pub fn steps(&self) -> StepSizes {
        let s = self.step_size();
        StepSizes::constant(s, s)
    }
}

/// Build `min (μ/2) ||Lx - b||² + J(Dx)` as a DC problem with `K = D`.
pub fn assemble_model(spec: &ModelSpec, blur: Arc<dyn LinearMap>, b: &DenseVector) -> Result<DcProblem> {
    spec.penalty.validate()?;
    if !(spec.mu > 0.0 && spec.mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("data weight mu must be > 0, got {}", spec.mu)));
    }
    if !b.is_finite() {
        return Err(Error::InvalidParameter("observed image has non-finite samples".into()));
    }
    let d: Arc<dyn LinearMap> = Arc::new(DiscreteGradient::new(b.shape())?);
    let phi = make_data_term(blur, b.clone(), spec.mu)?;
    let g = AnisoTv::new(spec.penalty.tv_weight(), d.clone(), spec.tv)?;
    let p = match spec.penalty {
        Penalty::Scad { lambda, a } => DcProblem::new(
            Box::new(g),
            Box::new(phi),
            Box::new(ScadConj::new(lambda, a)?),
            Some(Box::new(ScadConcave::new(lambda, a)?)),
            d,
        ),
        Penalty::Zhang { a } => DcProblem::new(
            Box::new(g),
            Box::new(phi),
            Box::new(ZhangConj::new(a)?),
            Some(Box::new(ZhangConcave::new(a)?)),
            d,
        ),
        Penalty::Lzox { alpha } => DcProblem::new(
            Box::new(g),
            Box::new(phi),
            Box::new(CrossNormBall::new(alpha)?),
            Some(Box::new(CrossNorm::new(alpha)?)),
            d,
        ),
    };
    Ok(p)
}
