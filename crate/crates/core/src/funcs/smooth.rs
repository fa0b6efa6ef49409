use std::sync::Arc;

use super::SmoothConvexFunction;
use crate::error::{Error, Result};
use crate::linop::{DenseVector, LinearMap};

/// The zero function, `beta = +inf`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSmooth;

impl SmoothConvexFunction for ZeroSmooth {
    fn value(&self, _x: &DenseVector) -> f64 {
        0.0
    }
    fn gradient(&self, x: &DenseVector) -> DenseVector {
        DenseVector::zeros(x.shape())
    }
    fn beta(&self) -> f64 {
        f64::INFINITY
    }
}

/// Least-squares fidelity `(mu/2) ||L x - b||²`.
pub struct DataTerm {
    op: Arc<dyn LinearMap>,
    observed: DenseVector,
    mu: f64,
}

impl DataTerm {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn observed(&self) -> &DenseVector {
        &self.observed
    }

    fn residual(&self, x: &DenseVector) -> DenseVector {
        let mut r = self.op.apply(x);
        for (ri, bi) in r.data_mut().iter_mut().zip(self.observed.data()) {
            *ri -= bi;
        }
        r
    }
}

pub fn make_data_term(op: Arc<dyn LinearMap>, observed: DenseVector, mu: f64) -> Result<DataTerm> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("data weight must be > 0, got {mu}")));
    }
    observed.check_shape(op.codomain())?;
    Ok(DataTerm { op, observed, mu })
}

impl SmoothConvexFunction for DataTerm {
    fn value(&self, x: &DenseVector) -> f64 {
        0.5 * self.mu * self.residual(x).norm_sq()
    }

    fn gradient(&self, x: &DenseVector) -> DenseVector {
        self.op.apply_adjoint(&self.residual(x)).scaled(self.mu)
    }

    fn beta(&self) -> f64 {
        let l = self.op.norm_bound();
        if l == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (self.mu * l * l)
        }
    }
}
