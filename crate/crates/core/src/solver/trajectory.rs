//! Trajectories and their CSV form.
//!
//! The CSV has the header `n,phi,primal,dx,dy,residual,inner_iters,wall_ms`
//! and one row per iteration; reals are written with 17 significant digits.
//! A sidecar `<name>.meta` file carries the step-size summary and `Φ(x0, y0)`
//! in `key=value` lines so the certificates can be re-checked from disk.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::linop::DenseVector;

pub const CSV_HEADER: &str = "n,phi,primal,dx,dy,residual,inner_iters,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Criticality residual below tolerance.
    Converged,
    MaxIters,
    /// Consecutive iterates (numerically) equal.
    FixedPoint,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIters => "max_iters",
            Status::FixedPoint => "fixed_point",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub n: usize,
    pub phi: f64,
    /// `Φ(x_n, y_{n-1})`, the energy between the two half steps.
    pub phi_mid: f64,
    pub primal: Option<f64>,
    pub dx: f64,
    pub dy: f64,
    pub residual: f64,
    pub x_star: f64,
    pub y_star: f64,
    pub inner_iters: usize,
    pub refinements: usize,
    pub inner_warning: bool,
    pub wall_ms: f64,
}

impl IterRecord {
    /// `sqrt(dx² + dy²)`.
    pub fn gap(&self) -> f64 {
        self.dx.hypot(self.dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    pub gamma_inf: f64,
    pub gamma_sup: f64,
    pub mu_inf: f64,
    pub mu_sup: f64,
    pub beta: f64,
    pub k_norm: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<IterRecord>,
    pub status: Status,
    pub phi0: f64,
    pub primal0: Option<f64>,
    pub steps: StepSummary,
    pub x: DenseVector,
    pub y: DenseVector,
}

fn real(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterRecord> {
        self.records.last()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n,
                real(r.phi),
                real(r.primal.unwrap_or(f64::NAN)),
                real(r.dx),
                real(r.dy),
                real(r.residual),
                r.inner_iters,
                real(r.wall_ms)
            );
        }
        out
    }

    pub fn meta(&self) -> TrajectoryMeta {
        TrajectoryMeta {
            phi0: self.phi0,
            steps: self.steps,
            status: self.status.as_str().to_string(),
        }
    }

    /// Write `path` and its `.meta` sidecar, each through a temp file + rename.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())?;
        write_atomic(&meta_path(path), self.meta().to_text().as_bytes())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub phi0: f64,
    pub steps: StepSummary,
    pub status: String,
}

impl TrajectoryMeta {
    pub fn to_text(&self) -> String {
        let s = &self.steps;
        format!(
            "phi0={}\ngamma_inf={}\ngamma_sup={}\nmu_inf={}\nmu_sup={}\nbeta={}\nk_norm={}\nstatus={}\n",
            real(self.phi0),
            real(s.gamma_inf),
            real(s.gamma_sup),
            real(s.mu_inf),
            real(s.mu_sup),
            real(s.beta),
            real(s.k_norm),
            self.status
        )
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let bad = |reason: String| Error::MalformedCsv {
            path: path.to_path_buf(),
            reason,
        };
        let mut get = std::collections::HashMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("bad meta line `{line}`")))?;
            get.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |k: &str| -> Result<f64> {
            get.get(k)
                .ok_or_else(|| bad(format!("meta key `{k}` missing")))?
                .parse::<f64>()
                .map_err(|e| bad(format!("meta key `{k}`: {e}")))
        };
        Ok(TrajectoryMeta {
            phi0: num("phi0")?,
            steps: StepSummary {
                gamma_inf: num("gamma_inf")?,
                gamma_sup: num("gamma_sup")?,
                mu_inf: num("mu_inf")?,
                mu_sup: num("mu_sup")?,
                beta: num("beta")?,
                k_norm: num("k_norm")?,
            },
            status: get.get("status").cloned().unwrap_or_default(),
        })
    }
}

/// One data row of a trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub n: usize,
    pub phi: f64,
    pub primal: f64,
    pub dx: f64,
    pub dy: f64,
    pub residual: f64,
    pub inner_iters: usize,
    pub wall_ms: f64,
}

/// A trajectory read back from disk.
#[derive(Debug, Clone)]
pub struct RecordedTrajectory {
    pub path: PathBuf,
    pub rows: Vec<CsvRow>,
    pub meta: Option<TrajectoryMeta>,
}

pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta")
}

pub fn parse_trajectory_csv(text: &str, path: &Path) -> Result<Vec<CsvRow>> {
    let bad = |reason: String| Error::MalformedCsv {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(bad(format!("unexpected header `{header}`")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 8 {
            return Err(bad(format!("row {}: expected 8 columns, got {}", i + 1, cols.len())));
        }
        let f = |k: usize| -> Result<f64> {
            cols[k]
                .parse::<f64>()
                .map_err(|e| bad(format!("row {} column {}: {e}", i + 1, k + 1)))
        };
        let u = |k: usize| -> Result<usize> {
            cols[k]
                .parse::<usize>()
                .map_err(|e| bad(format!("row {} column {}: {e}", i + 1, k + 1)))
        };
        rows.push(CsvRow {
            n: u(0)?,
            phi: f(1)?,
            primal: f(2)?,
            dx: f(3)?,
            dy: f(4)?,
            residual: f(5)?,
            inner_iters: u(6)?,
            wall_ms: f(7)?,
        });
    }
    Ok(rows)
}

/// Read a trajectory CSV and, when present, its `.meta` sidecar.
pub fn read_trajectory(path: &Path) -> Result<RecordedTrajectory> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = parse_trajectory_csv(&text, path)?;
    let mp = meta_path(path);
    let meta = if mp.exists() {
        let t = fs::read_to_string(&mp).map_err(|e| Error::io(&mp, e))?;
        Some(TrajectoryMeta::parse(&t, &mp)?)
    } else {
        None
    };
    Ok(RecordedTrajectory {
        path: path.to_path_buf(),
        rows,
        meta,
    })
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
