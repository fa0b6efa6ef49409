use crate::error::{Error, Result};
use crate::linop::{DenseVector, LinearMap, Shape};

/// Forward-difference gradient `D x = (K1 x, K2 x)`.
///
/// `K1` differences down the columns, `K2` across the rows; both are zero on
/// the last row (resp. column). The adjoint is the matching negative divergence.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteGradient {
    rows: usize,
    cols: usize,
}

impl DiscreteGradient {
    pub fn new(shape: Shape) -> Result<Self> {
        if shape.planes != 1 {
            return Err(Error::Dimension {
                expected: Shape::image(shape.rows, shape.cols),
                got: shape,
            });
        }
        if shape.rows < 2 || shape.cols < 2 {
            return Err(Error::InvalidParameter(format!("image must be at least 2x2, got {shape:?}")));
        }
        Ok(DiscreteGradient {
            rows: shape.rows,
            cols: shape.cols,
        })
    }
}

impl LinearMap for DiscreteGradient {
    fn domain(&self) -> Shape {
        Shape::image(self.rows, self.cols)
    }

    fn codomain(&self) -> Shape {
        Shape::field(self.rows, self.cols)
    }

    fn apply(&self, x: &DenseVector) -> DenseVector {
        let (m, n) = (self.rows, self.cols);
        let u = x.data();
        let mut out = DenseVector::zeros(self.codomain());
        let (k1, k2) = out.data_mut().split_at_mut(m * n);
        for i in 0..m {
            for j in 0..n {
                let at = i * n + j;
                if i + 1 < m {
                    k1[at] = u[at + n] - u[at];
                }
                if j + 1 < n {
                    k2[at] = u[at + 1] - u[at];
                }
            }
        }
        out
    }

    fn apply_adjoint(&self, y: &DenseVector) -> DenseVector {
        let (m, n) = (self.rows, self.cols);
        let (p, q) = y.data().split_at(m * n);
        let mut out = DenseVector::zeros(self.domain());
        let v = out.data_mut();
        for i in 0..m {
            for j in 0..n {
                let at = i * n + j;
                let mut s = 0.0;
                if i + 1 < m {
                    s -= p[at];
                }
                if i > 0 {
                    s += p[at - n];
                }
                if j + 1 < n {
                    s -= q[at];
                }
                if j > 0 {
                    s += q[at - 1];
                }
                v[at] = s;
            }
        }
        out
    }

    fn norm_bound(&self) -> f64 {
        8f64.sqrt()
    }
}
