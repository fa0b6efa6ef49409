//! SCAD and Zhang penalties, split as `convex l1 part - convex h part`,
//! together with the closed-form proxes of the conjugates `h*`.

use super::basic::DOMAIN_SLACK;
use super::{ProxOptions, ProxOutcome, ProximableFunction, SubdifferentiableFunction};
use crate::error::{Error, Result};
use crate::linop::DenseVector;

/// SCAD penalty `g_{λ,a}` of one component.
pub fn scad_scalar(z: f64, lambda: f64, a: f64) -> f64 {
    let t = z.abs();
    if t <= lambda {
        lambda * t
    } else if t <= a * lambda {
        (-t * t + 2.0 * a * lambda * t - lambda * lambda) / (2.0 * (a - 1.0))
    } else {
        (a + 1.0) * lambda * lambda / 2.0
    }
}

/// Concave remainder `h_{λ,a}` with `g_{λ,a} = λ|z| - h_{λ,a}`.
pub fn scad_h_scalar(z: f64, lambda: f64, a: f64) -> f64 {
    let t = z.abs();
    if t <= lambda {
        0.0
    } else if t <= a * lambda {
        (t - lambda) * (t - lambda) / (2.0 * (a - 1.0))
    } else {
        lambda * t - (a + 1.0) * lambda * lambda / 2.0
    }
}

/// `h*_{λ,a}(s) = λ|s| + (a-1)s²/2` on `|s| <= λ`, `+inf` outside.
pub fn scad_conj_scalar(s: f64, lambda: f64, a: f64) -> f64 {
    let t = s.abs();
    if t > lambda + DOMAIN_SLACK * lambda.max(1.0) {
        return f64::INFINITY;
    }
    let t = t.min(lambda);
    lambda * t + 0.5 * (a - 1.0) * t * t
}

fn scad_h_derivative(z: f64, lambda: f64, a: f64) -> f64 {
    let t = z.abs();
    let mag = if t <= lambda {
        0.0
    } else if t <= a * lambda {
        (t - lambda) / (a - 1.0)
    } else {
        lambda
    };
    mag.copysign(z)
}

/// `Prox_{γ h*_{λ,a}}(z)` for a single component.
pub fn prox_scad_conj_scalar(gamma: f64, z: f64, lambda: f64, a: f64) -> f64 {
    let outer = (1.0 + gamma * a) * lambda;
    let inner = gamma * lambda;
    let denom = 1.0 + gamma * a - gamma;
    if z <= -outer {
        -lambda
    } else if z <= -inner {
        ((z + inner) / denom).max(-lambda)
    } else if z <= inner {
        0.0
    } else if z <= outer {
        ((z - inner) / denom).min(lambda)
    } else {
        lambda
    }
}

pub fn scad_value(z: &DenseVector, lambda: f64, a: f64) -> f64 {
    z.data().iter().map(|&v| scad_scalar(v, lambda, a)).sum()
}

pub fn scad_h_value(z: &DenseVector, lambda: f64, a: f64) -> f64 {
    z.data().iter().map(|&v| scad_h_scalar(v, lambda, a)).sum()
}

pub fn prox_scad_conj(gamma: f64, z: &DenseVector, lambda: f64, a: f64) -> DenseVector {
    z.map(|v| prox_scad_conj_scalar(gamma, v, lambda, a))
}

/// Zhang penalty `g_a` of one component.
pub fn zhang_scalar(z: f64, a: f64) -> f64 {
    let t = z.abs();
    if t < a {
        t / a
    } else {
        1.0
    }
}

/// Concave remainder `h_a` with `g_a = |z|/a - h_a`.
pub fn zhang_h_scalar(z: f64, a: f64) -> f64 {
    let t = z.abs();
    if t < a {
        0.0
    } else {
        (t - a) / a
    }
}

/// `h*_a(s) = a|s|` on `|s| <= 1/a`, `+inf` outside.
pub fn zhang_conj_scalar(s: f64, a: f64) -> f64 {
    let r = 1.0 / a;
    let t = s.abs();
    if t > r + DOMAIN_SLACK * r.max(1.0) {
        return f64::INFINITY;
    }
    a * t.min(r)
}

/// `Prox_{γ h*_a}(z)` for a single component.
pub fn prox_zhang_conj_scalar(gamma: f64, z: f64, a: f64) -> f64 {
    let r = 1.0 / a;
    let shift = gamma * a;
    if z <= -r - shift {
        -r
    } else if z <= -shift {
        (z + shift).max(-r)
    } else if z <= shift {
        0.0
    } else if z <= r + shift {
        (z - shift).min(r)
    } else {
        r
    }
}

pub fn zhang_value(z: &DenseVector, a: f64) -> f64 {
    z.data().iter().map(|&v| zhang_scalar(v, a)).sum()
}

pub fn zhang_h_value(z: &DenseVector, a: f64) -> f64 {
    z.data().iter().map(|&v| zhang_h_scalar(v, a)).sum()
}

pub fn prox_zhang_conj(gamma: f64, z: &DenseVector, a: f64) -> DenseVector {
    z.map(|v| prox_zhang_conj_scalar(gamma, v, a))
}

fn check_scad(lambda: f64, a: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) || !(a > 1.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "SCAD needs lambda > 0 and a > 1, got lambda={lambda}, a={a}"
        )));
    }
    Ok(())
}

fn check_zhang(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("Zhang needs a > 0, got {a}")));
    }
    Ok(())
}

/// Concave part `h_{λ,a}` of SCAD, summed over components.
#[derive(Debug, Clone, Copy)]
pub struct ScadConcave {
    lambda: f64,
    a: f64,
}

impl ScadConcave {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        check_scad(lambda, a)?;
        Ok(ScadConcave { lambda, a })
    }
}

impl SubdifferentiableFunction for ScadConcave {
    fn value(&self, z: &DenseVector) -> f64 {
        scad_h_value(z, self.lambda, self.a)
    }
    fn subgradient(&self, z: &DenseVector) -> DenseVector {
        z.map(|v| scad_h_derivative(v, self.lambda, self.a))
    }
}

/// Conjugate `h*_{λ,a}` of the SCAD concave part.
#[derive(Debug, Clone, Copy)]
pub struct ScadConj {
    lambda: f64,
    a: f64,
}

impl ScadConj {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        check_scad(lambda, a)?;
        Ok(ScadConj { lambda, a })
    }
}

impl ProximableFunction for ScadConj {
    fn value(&self, y: &DenseVector) -> f64 {
        y.data().iter().map(|&s| scad_conj_scalar(s, self.lambda, self.a)).sum()
    }
    fn prox_with(&self, gamma: f64, y: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        ProxOutcome::exact(prox_scad_conj(gamma, y, self.lambda, self.a))
    }
}

/// Concave part `h_a` of the Zhang penalty.
#[derive(Debug, Clone, Copy)]
pub struct ZhangConcave {
    a: f64,
}

impl ZhangConcave {
    pub fn new(a: f64) -> Result<Self> {
        check_zhang(a)?;
        Ok(ZhangConcave { a })
    }
}

impl SubdifferentiableFunction for ZhangConcave {
    fn value(&self, z: &DenseVector) -> f64 {
        zhang_h_value(z, self.a)
    }
    fn subgradient(&self, z: &DenseVector) -> DenseVector {
        let a = self.a;
        // at |z| = a the subdifferential is [0, 1/a]; pick 0
        z.map(|v| if v.abs() > a { v.signum() / a } else { 0.0 })
    }
}

/// Conjugate `h*_a` of the Zhang concave part.
#[derive(Debug, Clone, Copy)]
pub struct ZhangConj {
    a: f64,
}

impl ZhangConj {
    pub fn new(a: f64) -> Result<Self> {
        check_zhang(a)?;
        Ok(ZhangConj { a })
    }
}

impl ProximableFunction for ZhangConj {
    fn value(&self, y: &DenseVector) -> f64 {
        y.data().iter().map(|&s| zhang_conj_scalar(s, self.a)).sum()
    }
    fn prox_with(&self, gamma: f64, y: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        ProxOutcome::exact(prox_zhang_conj(gamma, y, self.a))
    }
}
