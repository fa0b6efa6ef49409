//! Shared instances and oracles for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use dcprox::funcs::{BoxIndicator, L1Norm, SquaredNorm, TvSettings, ZeroSmooth};
use dcprox::imaging::{assemble_model, degrade_with, synthetic_texture, BlurSpec, GaussianBlur, ModelSpec, Penalty};
use dcprox::linop::{DenseVector, Identity, LinearMap, Shape, ZeroMap};
use dcprox::solver::DcProblem;

/// `g = ½||x||²`, `φ = 0`, `h = ½||·||²` (so `h* = ½||·||²`), `K = 0`:
/// `x+ = x / (1 + γ)`, `y+ = y / (1 + μ)`.
pub fn decoupled_quadratic(n: usize) -> DcProblem {
    let s = Shape::flat(n);
    DcProblem::new(
        Box::new(SquaredNorm::new(0.5)),
        Box::new(ZeroSmooth),
        Box::new(SquaredNorm::new(0.5)),
        Some(Box::new(SquaredNorm::new(0.5))),
        Arc::new(ZeroMap::new(s, s)),
    )
}

/// `g = x²`, `φ = 0`, `h = |·|` (so `h*` is the indicator of `[-1, 1]`), `K = Id`.
pub fn scalar_dc() -> DcProblem {
    let s = Shape::flat(1);
    DcProblem::new(
        Box::new(SquaredNorm::new(1.0)),
        Box::new(ZeroSmooth),
        Box::new(BoxIndicator::new(1.0)),
        Some(Box::new(L1Norm::new(1.0))),
        Arc::new(Identity::new(s)),
    )
}

pub fn scalar(v: f64) -> DenseVector {
    DenseVector::from_vec(vec![v])
}

/// A degraded synthetic image and its restoration model.
pub struct ImagingInstance {
    pub original: DenseVector,
    pub observed: DenseVector,
    pub spec: ModelSpec,
    pub problem: DcProblem,
}

pub fn imaging_instance(size: usize, penalty: Penalty, mu: f64, tv: TvSettings) -> ImagingInstance {
    let shape = Shape::image(size, size);
    let original = synthetic_texture(shape, 0).unwrap();
    let blur: Arc<dyn LinearMap> = Arc::new(GaussianBlur::new(BlurSpec::gaussian(2.0), shape).unwrap());
    let observed = degrade_with(&original, blur.as_ref(), 50.0 / 255.0, 1).unwrap().observed;
    let spec = ModelSpec { tv, ..ModelSpec::new(penalty, mu) };
    let problem = assemble_model(&spec, blur, &observed).unwrap();
    ImagingInstance {
        original,
        observed,
        spec,
        problem,
    }
}

/// Accelerated projected gradient (FISTA) on the TV-prox dual
/// `min { γ/2 ||D* p||² - <b, D* p> : ||p||_∞ <= 1 }`, run until the duality
/// gap `||Dx||_1 - <p, Dx>` drops below `gap_tol`. Returns `(x, gap)`.
pub fn tv_prox_oracle(gamma: f64, b: &DenseVector, d: &dyn LinearMap, gap_tol: f64) -> (DenseVector, f64) {
    let tau = 1.0 / (gamma * 8.0);
    let mut p = DenseVector::zeros(d.codomain());
    let mut z = p.clone();
    let mut t: f64 = 1.0;
    let primal = |q: &DenseVector| {
        let mut x = b.clone();
        x.axpy(-gamma, &d.apply_adjoint(q)).unwrap();
        x
    };
    let gap_of = |q: &DenseVector| {
        let x = primal(q);
        let dx = d.apply(&x);
        let g = dx.norm_l1() - dcprox::linop::inner(q, &dx).unwrap();
        (x, g)
    };
    for k in 0..2_000_000 {
        let dx = d.apply(&primal(&z));
        let mut next = z.clone();
        for (v, g) in next.data_mut().iter_mut().zip(dx.data()) {
            *v = (*v + tau * g).clamp(-1.0, 1.0);
        }
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let w = (t - 1.0) / t_next;
        z = next.zip_with(&p, |a, b| a + w * (a - b)).unwrap();
        p = next;
        t = t_next;
        if k % 50 == 0 {
            let (x, g) = gap_of(&p);
            if g <= gap_tol {
                return (x, g);
            }
        }
    }
    gap_of(&p)
}
