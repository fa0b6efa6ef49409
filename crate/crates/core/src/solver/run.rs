use std::time::Instant;

use super::iteration::{dc_step, CertificateMode, SolverState};
use super::problem::DcProblem;
use super::steps::StepSizes;
use super::trajectory::{IterRecord, Status, StepSummary, Trajectory};
use crate::error::Result;
use crate::linop::DenseVector;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub steps: StepSizes,
    /// Stop once the criticality residual drops below this.
    /// `None` means `1e-6 * (1 + ||x0||)`.
    pub tol_residual: Option<f64>,
    /// Stop once `max(dx, dy)` drops below this (a numerical fixed point).
    /// `None` means `1e-12 * (1 + ||x0||)`.
    pub tol_dxdy: Option<f64>,
    pub max_iters: usize,
    pub certificates: CertificateMode,
    /// Fill the `wall_ms` column; off keeps trajectories reproducible byte for byte.
    pub record_timing: bool,
}

impl RunConfig {
    pub fn new(steps: StepSizes) -> Self {
        RunConfig {
            steps,
            tol_residual: None,
            tol_dxdy: None,
            max_iters: 50,
            certificates: CertificateMode::Descent,
            record_timing: false,
        }
    }

    pub fn max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn certificates(mut self, mode: CertificateMode) -> Self {
        self.certificates = mode;
        self
    }

    pub fn tol_residual(mut self, tol: f64) -> Self {
        self.tol_residual = Some(tol);
        self
    }

    pub fn tol_dxdy(mut self, tol: f64) -> Self {
        self.tol_dxdy = Some(tol);
        self
    }
}

/// Iterate from `(x0, y0)` until a stopping rule fires. `y0 = None` picks
/// [`DcProblem::initial_dual`].
pub fn run(p: &DcProblem, x0: DenseVector, y0: Option<DenseVector>, cfg: &RunConfig) -> Result<Trajectory> {
    run_with_observer(p, x0, y0, cfg, |_| {})
}

/// Like [`run`], calling `observe` on every state after `n = 0`.
pub fn run_with_observer(
    p: &DcProblem,
    x0: DenseVector,
    y0: Option<DenseVector>,
    cfg: &RunConfig,
    mut observe: impl FnMut(&SolverState),
) -> Result<Trajectory> {
    let beta = p.beta();
    cfg.steps.validate(beta)?;
    let y0 = match y0 {
        Some(y) => y,
        None => p.initial_dual(&x0)?,
    };
    let scale = 1.0 + x0.norm();
    let tol_residual = cfg.tol_residual.unwrap_or(1e-6 * scale);
    let tol_dxdy = cfg.tol_dxdy.unwrap_or(1e-12 * scale);

    let primal0 = p.primal_value(&x0)?;
    let mut state = SolverState::initial(p, x0, y0)?;
    let phi0 = state.phi_val;
    let started = Instant::now();
    let mut records = Vec::new();
    let mut status = Status::MaxIters;

    while state.n < cfg.max_iters {
        let gamma = cfg.steps.gamma.at(state.n);
        let mu = cfg.steps.mu.at(state.n);
        let (next, info) = dc_step(p, &state, gamma, mu, cfg.certificates)?;
        state = next;
        observe(&state);
        records.push(IterRecord {
            n: state.n,
            phi: state.phi_val,
            phi_mid: info.phi_mid,
            primal: p.primal_value(&state.x)?,
            dx: state.dx,
            dy: state.dy,
            residual: state.residual,
            x_star: state.x_star_norm,
            y_star: state.y_star_norm,
            inner_iters: info.inner_iters,
            refinements: info.refinements,
            inner_warning: info.inner_warning,
            wall_ms: if cfg.record_timing {
                started.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            },
        });
        if state.dx.max(state.dy) < tol_dxdy {
            status = Status::FixedPoint;
            break;
        }
        if state.residual < tol_residual {
            status = Status::Converged;
            break;
        }
    }

    Ok(Trajectory {
        records,
        status,
        phi0,
        primal0,
        steps: StepSummary {
            gamma_inf: cfg.steps.gamma.inf(),
            gamma_sup: cfg.steps.gamma.sup(),
            mu_inf: cfg.steps.mu.inf(),
            mu_sup: cfg.steps.mu.sup(),
            beta,
            k_norm: p.k.norm_bound(),
        },
        x: state.x,
        y: state.y,
    })
}
