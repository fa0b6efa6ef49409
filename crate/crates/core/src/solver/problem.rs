use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcs::{ProximableFunction, SmoothConvexFunction, SubdifferentiableFunction};
use crate::linop::{inner, DenseVector, LinearMap, Shape};

/// `min_x g(x) + φ(x) - h(Kx)`, described through the pieces the iteration uses.
pub struct DcProblem {
    /// Convex part, evaluated through its prox.
    pub g: Box<dyn ProximableFunction>,
    /// Smooth convex part, evaluated through its gradient.
    pub phi: Box<dyn SmoothConvexFunction>,
    /// Conjugate `h*` of the concave part, evaluated through its prox.
    pub h_conj: Box<dyn ProximableFunction>,
    /// The concave part itself; optional, used for primal values and `y0 ∈ ∂h(K x0)`.
    pub h: Option<Box<dyn SubdifferentiableFunction>>,
    pub k: Arc<dyn LinearMap>,
}

impl DcProblem {
    pub fn new(
        g: Box<dyn ProximableFunction>,
        phi: Box<dyn SmoothConvexFunction>,
        h_conj: Box<dyn ProximableFunction>,
        h: Option<Box<dyn SubdifferentiableFunction>>,
        k: Arc<dyn LinearMap>,
    ) -> Self {
        DcProblem { g, phi, h_conj, h, k }
    }

    pub fn primal_shape(&self) -> Shape {
        self.k.domain()
    }

    pub fn dual_shape(&self) -> Shape {
        self.k.codomain()
    }

    pub fn beta(&self) -> f64 {
        self.phi.beta()
    }

    /// Primal objective `g(x) + φ(x) - h(Kx)`, if `h` is available.
    pub fn primal_value(&self, x: &DenseVector) -> Result<Option<f64>> {
        x.check_shape(self.primal_shape())?;
        Ok(self
            .h
            .as_ref()
            .map(|h| self.g.value(x) + self.phi.value(x) - h.value(&self.k.apply(x))))
    }

    /// Dual starting point: a subgradient of `h` at `K x0` (zero when `h` is
    /// not supplied), projected onto the closure of `dom h*`.
    ///
    /// The projection uses `Prox_{0·h*}`, which every conjugate in this crate
    /// implements as the projection onto its domain.
    pub fn initial_dual(&self, x0: &DenseVector) -> Result<DenseVector> {
        x0.check_shape(self.primal_shape())?;
        let y0 = match &self.h {
            Some(h) => h.subgradient(&self.k.apply(x0)),
            None => DenseVector::zeros(self.dual_shape()),
        };
        Ok(self.h_conj.prox(0.0, &y0))
    }
}

/// Primal-dual energy `Φ(x, y) = g(x) + φ(x) + h*(y) - <y, Kx>`; `+inf` off `dom h*`.
pub fn pd_energy(p: &DcProblem, x: &DenseVector, y: &DenseVector) -> Result<f64> {
    x.check_shape(p.primal_shape())?;
    y.check_shape(p.dual_shape())?;
    let hc = p.h_conj.value(y);
    if hc == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let kx = p.k.apply(x);
    Ok(p.g.value(x) + p.phi.value(x) + hc - inner(y, &kx)?)
}

/// Errors out if `y` is not a sensible dual iterate shape-wise.
pub(crate) fn check_pair(p: &DcProblem, x: &DenseVector, y: &DenseVector) -> Result<()> {
    x.check_shape(p.primal_shape())?;
    y.check_shape(p.dual_shape())?;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidParameter("iterates contain non-finite entries".into()));
    }
    Ok(())
}
