//! The pixelwise Euclidean ("cross") norm of a two-plane field and the
//! projection onto the dual ball that serves as the prox of its conjugate.

use super::basic::DOMAIN_SLACK;
use super::{ProxOptions, ProxOutcome, ProximableFunction, SubdifferentiableFunction};
use crate::error::{Error, Result};
use crate::linop::{DenseVector, Shape};

fn check_field(y: &DenseVector) -> Result<()> {
    let s = y.shape();
    if s.planes != 2 {
        return Err(Error::Dimension {
            expected: Shape::field(s.rows, s.cols),
            got: s,
        });
    }
    Ok(())
}

fn pixel_norms(y: &DenseVector) -> impl Iterator<Item = f64> + '_ {
    y.plane(0).iter().zip(y.plane(1)).map(|(u, v)| u.hypot(*v))
}

/// `sum over pixels of sqrt(u² + v²)` for a field `y = (u, v)`.
pub fn cross_norm(y: &DenseVector) -> Result<f64> {
    check_field(y)?;
    Ok(pixel_norms(y).sum())
}

/// Prox of the conjugate of `alpha * ||.||_×`: pixelwise projection onto the
/// disc of radius `alpha`. Independent of `gamma`.
pub fn prox_crossnorm_conj(_gamma: f64, y: &DenseVector, alpha: f64) -> Result<DenseVector> {
    check_field(y)?;
    Ok(project_discs(y, alpha))
}

fn project_discs(y: &DenseVector, alpha: f64) -> DenseVector {
    let mut out = y.clone();
    let n = y.shape().plane_len();
    let data = out.data_mut();
    for k in 0..n {
        let (u, v) = (data[k], data[n + k]);
        let r = u.hypot(v);
        if r > alpha {
            let s = if r > 0.0 { alpha / r } else { 0.0 };
            data[k] = u * s;
            data[n + k] = v * s;
        }
    }
    out
}

/// `alpha * ||.||_×`, the concave part of the LZOX penalty.
#[derive(Debug, Clone, Copy)]
pub struct CrossNorm {
    alpha: f64,
}

impl CrossNorm {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("cross-norm weight must be >= 0, got {alpha}")));
        }
        Ok(CrossNorm { alpha })
    }
}

impl SubdifferentiableFunction for CrossNorm {
    fn value(&self, z: &DenseVector) -> f64 {
        self.alpha * pixel_norms(z).sum::<f64>()
    }

    fn subgradient(&self, z: &DenseVector) -> DenseVector {
        let mut out = DenseVector::zeros(z.shape());
        let n = z.shape().plane_len();
        let data = out.data_mut();
        for (k, (u, v)) in z.plane(0).iter().zip(z.plane(1)).enumerate() {
            let r = u.hypot(*v);
            if r > 0.0 {
                data[k] = self.alpha * u / r;
                data[n + k] = self.alpha * v / r;
            }
        }
        out
    }
}

/// Indicator of the pixelwise disc of radius `alpha`, the conjugate of [`CrossNorm`].
#[derive(Debug, Clone, Copy)]
pub struct CrossNormBall {
    alpha: f64,
}

impl CrossNormBall {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("ball radius must be >= 0, got {alpha}")));
        }
        Ok(CrossNormBall { alpha })
    }
}

impl ProximableFunction for CrossNormBall {
    fn value(&self, y: &DenseVector) -> f64 {
        let limit = self.alpha + DOMAIN_SLACK * self.alpha.max(1.0);
        if pixel_norms(y).all(|r| r <= limit) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox_with(&self, _gamma: f64, y: &DenseVector, _opts: &ProxOptions<'_>) -> ProxOutcome {
        ProxOutcome::exact(project_discs(y, self.alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixel(u: f64, v: f64) -> DenseVector {
        DenseVector::new(Shape::field(1, 1), vec![u, v]).unwrap()
    }

    #[test]
    fn cross_norm_basics() {
        assert_eq!(cross_norm(&DenseVector::zeros(Shape::field(3, 3))).unwrap(), 0.0);
        assert_eq!(cross_norm(&pixel(3.0, 4.0)).unwrap(), 5.0);
        assert!(cross_norm(&DenseVector::zeros(Shape::image(2, 2))).is_err());
    }

    #[test]
    fn cross_norm_is_between_l1_bounds() {
        for seed in 0..20 {
            let y = DenseVector::random_seeded(Shape::field(5, 4), seed);
            let c = cross_norm(&y).unwrap();
            let u1: f64 = y.plane(0).iter().map(|v| v.abs()).sum();
            let v1: f64 = y.plane(1).iter().map(|v| v.abs()).sum();
            assert!(c >= u1.max(v1) / 2f64.sqrt() - 1e-12);
            assert!(c <= u1 + v1 + 1e-12);
        }
    }

    #[test]
    fn projection_cases() {
        let p = prox_crossnorm_conj(1.0, &pixel(3.0, 4.0), 1.0).unwrap();
        assert!((p.data()[0] - 0.6).abs() < 1e-15 && (p.data()[1] - 0.8).abs() < 1e-15);
        let z = prox_crossnorm_conj(1.0, &pixel(3.0, 4.0), 0.0).unwrap();
        assert_eq!(z.data(), &[0.0, 0.0]);
        let inside = prox_crossnorm_conj(7.0, &pixel(0.1, -0.2), 1.0).unwrap();
        assert_eq!(inside.data(), &[0.1, -0.2]);
        let zero = prox_crossnorm_conj(1.0, &pixel(0.0, 0.0), 0.0).unwrap();
        assert_eq!(zero.data(), &[0.0, 0.0]);
    }

    #[test]
    fn projected_points_are_feasible() {
        let ball = CrossNormBall::new(0.4).unwrap();
        for seed in 0..10 {
            let y = DenseVector::random_seeded(Shape::field(6, 6), seed).scaled(3.0);
            assert_eq!(ball.value(&ball.prox(0.1, &y)), 0.0);
        }
        assert_eq!(ball.value(&pixel(0.5, 0.0)), f64::INFINITY);
    }

    #[test]
    fn subgradient_attains_fenchel_equality() {
        let h = CrossNorm::new(0.7).unwrap();
        let z = DenseVector::random_seeded(Shape::field(4, 4), 3);
        let s = h.subgradient(&z);
        let ip: f64 = z.data().iter().zip(s.data()).map(|(a, b)| a * b).sum();
        assert!((ip - h.value(&z)).abs() < 1e-12);
        assert_eq!(CrossNormBall::new(0.7).unwrap().value(&s), 0.0);
    }
}
