//! Double-proximal difference-of-convex optimization.
//!
//! Solves `min_x g(x) + φ(x) - h(Kx)` with the iteration
//!
//! ```text
//! x_{n+1} = Prox_{γ g}(x_n + γ K* y_n - γ ∇φ(x_n))
//! y_{n+1} = Prox_{μ h*}(y_n + μ K x_{n+1})
//! ```
//!
//! and checks, step by step, the energy certificates that make the method
//! trustworthy: monotone decrease of `Φ(x, y) = g(x) + φ(x) + h*(y) - <y, Kx>`,
//! summable iterate gaps, and explicit criticality residuals.
//!
//! Modules:
//! * [`linop`]: dense vectors and matrix-free linear maps;
//! * [`funcs`]: function interfaces and the prox zoo (SCAD, Zhang, cross norm, anisotropic TV);
//! * [`solver`]: the iteration, run loop, trajectories and diagnostics;
//! * [`imaging`]: gradient and blur operators, model assembly, ISNR, degradation, PGM I/O;
//! * [`harness`]: parameter sweeps, result tables and certificate re-verification.

pub mod error;
pub mod funcs;
pub mod harness;
pub mod imaging;
pub mod linop;
pub mod solver;

pub use error::{Error, Result};
