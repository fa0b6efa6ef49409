//! Re-check the energy certificates from recorded trajectory files.

use std::fs;
use std::path::{Path, PathBuf};

use super::experiment::{SERIES_FILE, SUMMARY_FILE};
use crate::error::{Error, Result};
use crate::solver::{read_trajectory, RecordedTrajectory, ENERGY_SLACK};

/// Relative slack on the residual bound (the CSV stores rounded norms).
const RESIDUAL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Iteration index `n` of the offending row.
    pub row: usize,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub rows: usize,
    /// Whether the `.meta` sidecar was found (summability and residual bounds need it).
    pub with_meta: bool,
    pub violation: Option<Violation>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug)]
pub struct VerifyReport {
    pub path: PathBuf,
    pub result: Result<Verdict>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        matches!(&self.result, Ok(v) if v.passed())
    }
}

fn slack(phi: f64) -> f64 {
    ENERGY_SLACK * (1.0 + phi.abs())
}

/// Check descent, the summability bound and the residual bound row by row;
/// stops at the first violation.
pub fn check_recorded(t: &RecordedTrajectory) -> Verdict {
    let verdict = |violation| Verdict {
        rows: t.rows.len(),
        with_meta: t.meta.is_some(),
        violation,
    };
    let mut prev_phi = t.meta.as_ref().map(|m| m.phi0);
    let mut prev_n = 0;
    let mut partial = 0.0;
    for r in &t.rows {
        if r.n <= prev_n {
            return verdict(Some(Violation {
                row: r.n,
                check: "ordering",
                detail: format!("iteration {} follows {}", r.n, prev_n),
            }));
        }
        prev_n = r.n;
        if !r.phi.is_finite() {
            return verdict(Some(Violation {
                row: r.n,
                check: "descent",
                detail: format!("energy is {}", r.phi),
            }));
        }
        if let Some(p) = prev_phi {
            if r.phi > p + slack(p) {
                return verdict(Some(Violation {
                    row: r.n,
                    check: "descent",
                    detail: format!("phi rose from {p:.17e} to {:.17e}", r.phi),
                }));
            }
        }
        prev_phi = Some(r.phi);
        partial += r.dx * r.dx + r.dy * r.dy;

        let Some(meta) = &t.meta else { continue };
        let s = &meta.steps;
        let eps = (1.0 / s.gamma_sup - 1.0 / (2.0 * s.beta)).min(1.0 / s.mu_sup);
        if eps > 0.0 {
            let bound = (meta.phi0 - r.phi) / eps;
            if partial > bound + slack(meta.phi0) / eps {
                return verdict(Some(Violation {
                    row: r.n,
                    check: "summability",
                    detail: format!("partial sum {partial:.6e} exceeds bound {bound:.6e}"),
                }));
            }
        }
        if s.gamma_sup <= 2.0 * s.beta {
            let xb = s.k_norm * r.dy + r.dx / s.gamma_inf;
            let yb = r.dy / s.mu_inf;
            let bound = xb.hypot(yb);
            if r.residual > bound * (1.0 + RESIDUAL_SLACK) + 1e-300 {
                return verdict(Some(Violation {
                    row: r.n,
                    check: "residual",
                    detail: format!("residual {:.6e} exceeds bound {bound:.6e}", r.residual),
                }));
            }
        }
    }
    verdict(None)
}

pub fn verify_file(path: &Path) -> Result<Verdict> {
    Ok(check_recorded(&read_trajectory(path)?))
}

/// Verify every given trajectory file.
pub fn verify_certificates(paths: &[PathBuf]) -> Vec<VerifyReport> {
    paths
        .iter()
        .map(|p| VerifyReport {
            path: p.clone(),
            result: verify_file(p),
        })
        .collect()
}

/// Trajectory files in `dir`: every `*.csv` except the summary tables and
/// ISNR curves, sorted by name.
pub fn trajectory_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
        if !name.ends_with(".csv") || name == SUMMARY_FILE || name == SERIES_FILE || name.ends_with("_isnr.csv") {
            continue;
        }
        out.push(path);
    }
    out.sort();
    Ok(out)
}
