//! Dense sample vectors and matrix-free linear maps.
//!
//! A [`DenseVector`] is a flat `f64` buffer tagged with a `(rows, cols, planes)`
//! shape. Images live in one plane; gradient fields carry two planes stacked
//! one after the other. [`LinearMap`] is the forward/adjoint pair every operator
//! in the crate implements, together with a certified upper bound on its norm.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
    pub planes: usize,
}

impl Shape {
    pub const fn new(rows: usize, cols: usize, planes: usize) -> Self {
        Shape { rows, cols, planes }
    }

    /// A single-plane image of `rows x cols` pixels.
    pub const fn image(rows: usize, cols: usize) -> Self {
        Shape::new(rows, cols, 1)
    }

    /// A two-plane field (one plane per difference direction).
    pub const fn field(rows: usize, cols: usize) -> Self {
        Shape::new(rows, cols, 2)
    }

    /// A flat vector of `n` samples.
    pub const fn flat(n: usize) -> Self {
        Shape::new(n, 1, 1)
    }

    pub const fn len(&self) -> usize {
        self.rows * self.cols * self.planes
    }

    pub const fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub const fn plane_len(&self) -> usize {
        self.rows * self.cols
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.rows, self.cols, self.planes)
    }
}

#[derive(Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<f64>,
    shape: Shape,
}

impl fmt::Debug for DenseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseVector")
            .field("shape", &self.shape)
            .field("data", &self.data)
            .finish()
    }
}

impl DenseVector {
    pub fn new(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::Dimension {
                expected: shape,
                got: Shape::flat(data.len()),
            });
        }
        Ok(DenseVector { data, shape })
    }

    pub fn from_vec(data: Vec<f64>) -> Self {
        let shape = Shape::flat(data.len());
        DenseVector { data, shape }
    }

    pub fn zeros(shape: Shape) -> Self {
        DenseVector {
            data: vec![0.0; shape.len()],
            shape,
        }
    }

    pub fn filled(shape: Shape, value: f64) -> Self {
        DenseVector {
            data: vec![value; shape.len()],
            shape,
        }
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(usize) -> f64) -> Self {
        DenseVector {
            data: (0..shape.len()).map(&mut f).collect(),
            shape,
        }
    }

    /// Uniform samples in `[-1, 1]` from a seeded generator.
    pub fn random(shape: Shape, rng: &mut impl Rng) -> Self {
        DenseVector::from_fn(shape, |_| rng.random_range(-1.0..=1.0))
    }

    pub fn random_seeded(shape: Shape, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseVector::random(shape, &mut rng)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Samples of plane `p` (0-based).
    pub fn plane(&self, p: usize) -> &[f64] {
        let n = self.shape.plane_len();
        &self.data[p * n..(p + 1) * n]
    }

    pub fn plane_mut(&mut self, p: usize) -> &mut [f64] {
        let n = self.shape.plane_len();
        &mut self.data[p * n..(p + 1) * n]
    }

    /// Reinterpret the samples under a new shape of the same length.
    pub fn reshaped(mut self, shape: Shape) -> Result<Self> {
        if shape.len() != self.data.len() {
            return Err(Error::Dimension {
                expected: shape,
                got: self.shape,
            });
        }
        self.shape = shape;
        Ok(self)
    }

    pub fn check_shape(&self, expected: Shape) -> Result<()> {
        if self.shape != expected {
            return Err(Error::Dimension {
                expected,
                got: self.shape,
            });
        }
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseVector {
        DenseVector {
            data: self.data.iter().map(|&v| f(v)).collect(),
            shape: self.shape,
        }
    }

    pub fn scaled(&self, alpha: f64) -> DenseVector {
        self.map(|v| alpha * v)
    }

    /// `self - other`; shapes must agree.
    pub fn sub(&self, other: &DenseVector) -> Result<DenseVector> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &DenseVector) -> Result<DenseVector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn zip_with(&self, other: &DenseVector, f: impl Fn(f64, f64) -> f64) -> Result<DenseVector> {
        other.check_shape(self.shape)?;
        Ok(DenseVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            shape: self.shape,
        })
    }

    /// `self += alpha * x`.
    pub fn axpy(&mut self, alpha: f64, x: &DenseVector) -> Result<()> {
        x.check_shape(self.shape)?;
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += alpha * b;
        }
        Ok(())
    }

    /// Euclidean distance `||self - other||`.
    pub fn dist(&self, other: &DenseVector) -> Result<f64> {
        other.check_shape(self.shape)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    /// Largest absolute componentwise difference.
    pub fn dist_inf(&self, other: &DenseVector) -> Result<f64> {
        other.check_shape(self.shape)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

/// Hilbert inner product `sum_i a_i b_i`.
pub fn inner(a: &DenseVector, b: &DenseVector) -> Result<f64> {
    b.check_shape(a.shape)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum())
}

/// A linear map between two finite-dimensional spaces, given matrix-free.
///
/// Implementors promise `<forward(x), y> = <x, adjoint(y)>` and
/// `||forward(x)|| <= norm_bound() * ||x||`.
pub trait LinearMap: Send + Sync {
    fn domain(&self) -> Shape;
    fn codomain(&self) -> Shape;
    fn apply(&self, x: &DenseVector) -> DenseVector;
    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector;
    fn norm_bound(&self) -> f64;

    fn forward(&self, x: &DenseVector) -> Result<DenseVector> {
        x.check_shape(self.domain())?;
        Ok(self.apply(x))
    }

    fn adjoint(&self, y: &DenseVector) -> Result<DenseVector> {
        y.check_shape(self.codomain())?;
        Ok(self.apply_adjoint(y))
    }
}

impl<T: LinearMap + ?Sized> LinearMap for Arc<T> {
    fn domain(&self) -> Shape {
        (**self).domain()
    }
    fn codomain(&self) -> Shape {
        (**self).codomain()
    }
    fn apply(&self, x: &DenseVector) -> DenseVector {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector {
        (**self).apply_adjoint(y)
    }
    fn norm_bound(&self) -> f64 {
        (**self).norm_bound()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity {
    shape: Shape,
}

impl Identity {
    pub fn new(shape: Shape) -> Self {
        Identity { shape }
    }
}

impl LinearMap for Identity {
    fn domain(&self) -> Shape {
        self.shape
    }
    fn codomain(&self) -> Shape {
        self.shape
    }
    fn apply(&self, x: &DenseVector) -> DenseVector {
        x.clone()
    }
    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector {
        y.clone()
    }
    fn norm_bound(&self) -> f64 {
        1.0
    }
}

/// The zero map between two spaces.
#[derive(Debug, Clone, Copy)]
pub struct ZeroMap {
    domain: Shape,
    codomain: Shape,
}

impl ZeroMap {
    pub fn new(domain: Shape, codomain: Shape) -> Self {
        ZeroMap { domain, codomain }
    }
}

impl LinearMap for ZeroMap {
    fn domain(&self) -> Shape {
        self.domain
    }
    fn codomain(&self) -> Shape {
        self.codomain
    }
    fn apply(&self, _x: &DenseVector) -> DenseVector {
        DenseVector::zeros(self.codomain)
    }
    fn apply_adjoint(&self, _y: &DenseVector) -> DenseVector {
        DenseVector::zeros(self.domain)
    }
    fn norm_bound(&self) -> f64 {
        0.0
    }
}

/// Componentwise scaling by a fixed vector of weights.
#[derive(Debug, Clone)]
pub struct Diagonal {
    weights: DenseVector,
}

impl Diagonal {
    pub fn new(weights: DenseVector) -> Self {
        Diagonal { weights }
    }
}

impl LinearMap for Diagonal {
    fn domain(&self) -> Shape {
        self.weights.shape()
    }
    fn codomain(&self) -> Shape {
        self.weights.shape()
    }
    fn apply(&self, x: &DenseVector) -> DenseVector {
        DenseVector {
            data: x.data.iter().zip(&self.weights.data).map(|(a, w)| a * w).collect(),
            shape: self.weights.shape,
        }
    }
    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector {
        self.apply(y)
    }
    fn norm_bound(&self) -> f64 {
        self.weights.norm_inf()
    }
}

/// `outer ∘ inner`; the norm bound is the product of the two bounds.
pub struct Composed<A, B> {
    outer: A,
    inner: B,
}

impl<A: LinearMap, B: LinearMap> Composed<A, B> {
    pub fn new(outer: A, inner: B) -> Result<Self> {
        if inner.codomain() != outer.domain() {
            return Err(Error::Dimension {
                expected: outer.domain(),
                got: inner.codomain(),
            });
        }
        Ok(Composed { outer, inner })
    }
}

impl<A: LinearMap, B: LinearMap> LinearMap for Composed<A, B> {
    fn domain(&self) -> Shape {
        self.inner.domain()
    }
    fn codomain(&self) -> Shape {
        self.outer.codomain()
    }
    fn apply(&self, x: &DenseVector) -> DenseVector {
        self.outer.apply(&self.inner.apply(x))
    }
    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector {
        self.inner.apply_adjoint(&self.outer.apply_adjoint(y))
    }
    fn norm_bound(&self) -> f64 {
        self.outer.norm_bound() * self.inner.norm_bound()
    }
}

/// Largest normalized adjoint defect `|<Kx, y> - <x, K*y>| / (||x|| ||y||)`
/// over `trials` random pairs drawn from a generator seeded with `seed`.
pub fn adjoint_test(map: &dyn LinearMap, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let x = DenseVector::random(map.domain(), &mut rng);
        let y = DenseVector::random(map.codomain(), &mut rng);
        let lhs: f64 = map.apply(&x).data.iter().zip(&y.data).map(|(a, b)| a * b).sum();
        let rhs: f64 = x.data.iter().zip(&map.apply_adjoint(&y).data).map(|(a, b)| a * b).sum();
        let scale = x.norm() * y.norm();
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    worst
}

/// Power iteration on `K*K` from a seeded random start.
///
/// Returns the running maximum of `||K v_k||` over unit iterates `v_k`, so the
/// estimate is a lower bound on `||K||` that never decreases with `iters`.
pub fn power_norm(map: &dyn LinearMap, iters: usize, seed: u64) -> Result<f64> {
    if map.domain().is_empty() || map.codomain().is_empty() {
        return Err(Error::ZeroDimension);
    }
    let mut v = DenseVector::random_seeded(map.domain(), seed);
    let mut best: f64 = 0.0;
    for _ in 0..iters.max(1) {
        let nv = v.norm();
        if nv == 0.0 {
            break;
        }
        v = v.scaled(1.0 / nv);
        let kv = map.apply(&v);
        best = best.max(kv.norm());
        v = map.apply_adjoint(&kv);
    }
    Ok(best)
}
