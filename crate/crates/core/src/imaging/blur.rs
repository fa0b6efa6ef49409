use crate::error::{Error, Result};
use crate::linop::{DenseVector, LinearMap, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Wrap around.
    Periodic,
    /// Mirror about the half-sample edge (`.. b a | a b ..`).
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlurSpec {
    pub std_dev: f64,
    pub boundary: Boundary,
    /// Kernel half-width; `None` means `ceil(4 * std_dev)`.
    pub radius: Option<usize>,
}

impl BlurSpec {
    pub fn gaussian(std_dev: f64) -> Self {
        BlurSpec {
            std_dev,
            boundary: Boundary::Periodic,
            radius: None,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius.unwrap_or((4.0 * self.std_dev).ceil() as usize)
    }

    /// Normalized taps `w[-r..=r]`.
    pub fn taps(&self) -> Result<Vec<f64>> {
        if !(self.std_dev > 0.0 && self.std_dev.is_finite()) {
            return Err(Error::InvalidParameter(format!("blur std_dev must be > 0, got {}", self.std_dev)));
        }
        let r = self.radius() as i64;
        let s2 = 2.0 * self.std_dev * self.std_dev;
        let mut w: Vec<f64> = (-r..=r).map(|k| (-((k * k) as f64) / s2).exp()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        Ok(w)
    }
}

/// Per-output-sample list of `(source index, weight)` along one axis.
type AxisStencil = Vec<Vec<(usize, f64)>>;

fn axis_stencil(len: usize, taps: &[f64], boundary: Boundary) -> AxisStencil {
    let r = (taps.len() / 2) as i64;
    let n = len as i64;
    let fold = |j: i64| -> usize {
        match boundary {
            Boundary::Periodic => j.rem_euclid(n) as usize,
            Boundary::Symmetric => {
                let t = j.rem_euclid(2 * n);
                (if t < n { t } else { 2 * n - 1 - t }) as usize
            }
        }
    };
    (0..n)
        .map(|i| {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(taps.len());
            for (k, &w) in (-r..=r).zip(taps) {
                let src = fold(i + k);
                match row.iter_mut().find(|(s, _)| *s == src) {
                    Some(e) => e.1 += w,
                    None => row.push((src, w)),
                }
            }
            row
        })
        .collect()
}

/// Separable Gaussian blur on single-plane images.
#[derive(Debug, Clone)]
pub struct GaussianBlur {
    shape: Shape,
    spec: BlurSpec,
    down: AxisStencil,
    across: AxisStencil,
}

impl GaussianBlur {
    pub fn new(spec: BlurSpec, shape: Shape) -> Result<Self> {
        if shape.planes != 1 || shape.is_empty() {
            return Err(Error::InvalidParameter(format!("blur needs a non-empty single-plane image, got {shape:?}")));
        }
        let taps = spec.taps()?;
        Ok(GaussianBlur {
            shape,
            spec,
            down: axis_stencil(shape.rows, &taps, spec.boundary),
            across: axis_stencil(shape.cols, &taps, spec.boundary),
        })
    }

    pub fn spec(&self) -> BlurSpec {
        self.spec
    }

    fn pass(&self, x: &[f64], adjoint: bool) -> Vec<f64> {
        let (m, n) = (self.shape.rows, self.shape.cols);
        // along rows (horizontal)
        let mut tmp = vec![0.0; m * n];
        for i in 0..m {
            let src = &x[i * n..(i + 1) * n];
            let dst = &mut tmp[i * n..(i + 1) * n];
            for (j, stencil) in self.across.iter().enumerate() {
                for &(s, w) in stencil {
                    if adjoint {
                        dst[s] += w * src[j];
                    } else {
                        dst[j] += w * src[s];
                    }
                }
            }
        }
        // along columns (vertical)
        let mut out = vec![0.0; m * n];
        for (i, stencil) in self.down.iter().enumerate() {
            for &(s, w) in stencil {
                let (from, to) = if adjoint { (i, s) } else { (s, i) };
                let src = &tmp[from * n..(from + 1) * n];
                for (o, v) in out[to * n..(to + 1) * n].iter_mut().zip(src) {
                    *o += w * v;
                }
            }
        }
        out
    }
}

impl LinearMap for GaussianBlur {
    fn domain(&self) -> Shape {
        self.shape
    }

    fn codomain(&self) -> Shape {
        self.shape
    }

    fn apply(&self, x: &DenseVector) -> DenseVector {
        DenseVector::new(self.shape, self.pass(x.data(), false)).expect("blur output has the image shape")
    }

    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector {
        DenseVector::new(self.shape, self.pass(y.data(), true)).expect("blur output has the image shape")
    }

    /// Every row and column of each 1-D stencil matrix sums to one.
    fn norm_bound(&self) -> f64 {
        1.0
    }
}
