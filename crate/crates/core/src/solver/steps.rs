use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A positive step-size sequence with known infimum and supremum.
#[derive(Clone)]
pub enum Schedule {
    Constant(f64),
    Custom {
        at: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
        inf: f64,
        sup: f64,
    },
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant(v) => write!(f, "Constant({v})"),
            Schedule::Custom { inf, sup, .. } => write!(f, "Custom {{ inf: {inf}, sup: {sup} }}"),
        }
    }
}

impl Schedule {
    pub fn at(&self, n: usize) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::Custom { at, .. } => at(n),
        }
    }

    pub fn inf(&self) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::Custom { inf, .. } => *inf,
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::Custom { sup, .. } => *sup,
        }
    }
}

/// Primal (`γ_n`) and dual (`μ_n`) step sizes.
#[derive(Debug, Clone)]
pub struct StepSizes {
    pub gamma: Schedule,
    pub mu: Schedule,
    /// Also require `sup γ_n < β`, the hypothesis of the KL convergence theorem.
    pub strict_kl: bool,
}

impl StepSizes {
    pub fn constant(gamma: f64, mu: f64) -> Self {
        StepSizes {
            gamma: Schedule::Constant(gamma),
            mu: Schedule::Constant(mu),
            strict_kl: false,
        }
    }

    /// Checks `0 < inf γ <= sup γ < 2β` and `0 < inf μ <= sup μ < inf`.
    pub fn validate(&self, beta: f64) -> Result<()> {
        let (gi, gs) = (self.gamma.inf(), self.gamma.sup());
        let (mi, ms) = (self.mu.inf(), self.mu.sup());
        if !(gi > 0.0 && gi <= gs) {
            return Err(Error::InvalidParameter(format!("need 0 < inf gamma <= sup gamma, got [{gi}, {gs}]")));
        }
        if !(gs < 2.0 * beta) {
            return Err(Error::InvalidParameter(format!("need sup gamma < 2 beta, got {gs} vs beta {beta}")));
        }
        if self.strict_kl && !(gs < beta) {
            return Err(Error::InvalidParameter(format!("strict KL mode needs sup gamma < beta, got {gs} vs {beta}")));
        }
        if !(mi > 0.0 && mi <= ms && ms.is_finite()) {
            return Err(Error::InvalidParameter(format!("need 0 < inf mu <= sup mu < inf, got [{mi}, {ms}]")));
        }
        Ok(())
    }
}
