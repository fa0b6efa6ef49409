use super::{ProxOptions, ProxOutcome, ProximableFunction, SmoothConvexFunction, SubdifferentiableFunction};
use crate::linop::DenseVector;

/// Relative slack used when testing membership in a closed set whose
/// boundary points come out of floating-point projections.
pub(crate) const DOMAIN_SLACK: f64 = 1e-12;

/// The zero function.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroFunction;

impl ProximableFunction for ZeroFunction {
    fn value(&self, _x: &DenseVector) -> f64 {
        0.0
    }
    fn prox_with(&self, _gamma: f64, x: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        ProxOutcome::exact(x.clone())
    }
}

impl SubdifferentiableFunction for ZeroFunction {
    fn value(&self, _z: &DenseVector) -> f64 {
        0.0
    }
    fn subgradient(&self, z: &DenseVector) -> DenseVector {
        DenseVector::zeros(z.shape())
    }
}

/// `weight * ||x||^2`.
#[derive(Debug, Clone, Copy)]
pub struct SquaredNorm {
    pub weight: f64,
}

impl SquaredNorm {
    pub fn new(weight: f64) -> Self {
        SquaredNorm { weight }
    }
}

impl ProximableFunction for SquaredNorm {
    fn value(&self, x: &DenseVector) -> f64 {
        self.weight * x.norm_sq()
    }
    fn prox_with(&self, gamma: f64, x: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        ProxOutcome::exact(x.scaled(1.0 / (1.0 + 2.0 * gamma * self.weight)))
    }
}

impl SmoothConvexFunction for SquaredNorm {
    fn value(&self, x: &DenseVector) -> f64 {
        self.weight * x.norm_sq()
    }
    fn gradient(&self, x: &DenseVector) -> DenseVector {
        x.scaled(2.0 * self.weight)
    }
    fn beta(&self) -> f64 {
        if self.weight == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (2.0 * self.weight)
        }
    }
}

impl SubdifferentiableFunction for SquaredNorm {
    fn value(&self, z: &DenseVector) -> f64 {
        self.weight * z.norm_sq()
    }
    fn subgradient(&self, z: &DenseVector) -> DenseVector {
        z.scaled(2.0 * self.weight)
    }
}

/// `weight * ||x||_1`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    pub weight: f64,
}

impl L1Norm {
    pub fn new(weight: f64) -> Self {
        L1Norm { weight }
    }
}

pub(crate) fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

impl ProximableFunction for L1Norm {
    fn value(&self, x: &DenseVector) -> f64 {
        self.weight * x.norm_l1()
    }
    fn prox_with(&self, gamma: f64, x: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        let t = gamma * self.weight;
        ProxOutcome::exact(x.map(|v| soft_threshold(v, t)))
    }
}

impl SubdifferentiableFunction for L1Norm {
    fn value(&self, z: &DenseVector) -> f64 {
        self.weight * z.norm_l1()
    }
    fn subgradient(&self, z: &DenseVector) -> DenseVector {
        let w = self.weight;
        z.map(|v| if v > 0.0 { w } else if v < 0.0 { -w } else { 0.0 })
    }
}

/// Indicator of the box `[-radius, radius]^d`, the conjugate of `radius * ||.||_1`.
#[derive(Debug, Clone, Copy)]
pub struct BoxIndicator {
    pub radius: f64,
}

impl BoxIndicator {
    pub fn new(radius: f64) -> Self {
        BoxIndicator { radius }
    }
}

impl ProximableFunction for BoxIndicator {
    fn value(&self, x: &DenseVector) -> f64 {
        let limit = self.radius + DOMAIN_SLACK * self.radius.max(1.0);
        if x.data().iter().all(|v| v.abs() <= limit) {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn prox_with(&self, _gamma: f64, x: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        let r = self.radius;
        ProxOutcome::exact(x.map(|v| v.clamp(-r, r)))
    }
}
