use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ImageSource, StepRule};
use crate::error::{Error, Result};
use crate::imaging::{assemble_model, degrade_with, isnr, read_pgm, synthetic_texture, GaussianBlur, ModelSpec};
use crate::linop::{DenseVector, LinearMap, Shape};
use crate::solver::{run_with_observer, write_atomic, RunConfig, Status};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SERIES_FILE: &str = "isnr_series.csv";
pub const LOG_FILE: &str = "run.log";
pub const SUMMARY_HEADER: &str = "cell,penalty,mu,param,isnr,iterations,status,file";
pub const SERIES_HEADER: &str = "cell,iteration,isnr";

/// Environment variable capping the number of cells solved in parallel.
pub const THREADS_ENV: &str = "DCPROX_THREADS";

/// Decimal rendering with `.` replaced by `p` (`0.4` -> `0p4`).
pub fn number_token(v: f64) -> String {
    format!("{v}").replace('.', "p").replace('-', "m")
}

/// `{penalty}_{mu}_{param}`, the stem of a cell's trajectory file.
pub fn cell_name(spec: &ModelSpec) -> String {
    format!("{}_{}_{}", spec.penalty.tag(), number_token(spec.mu), number_token(spec.penalty.param()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub cell: String,
    pub penalty: String,
    pub mu: f64,
    /// α for LZOX, `a` for Zhang, λ for SCAD.
    pub param: f64,
    /// ISNR of the last iterate.
    pub isnr: f64,
    pub iterations: usize,
    pub status: String,
    /// Trajectory CSV, relative to the output directory.
    pub file: String,
    /// ISNR of `x_1, x_2, ...`.
    pub isnr_series: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub cell: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub output: PathBuf,
    pub rows: Vec<ResultRow>,
    pub failures: Vec<CellFailure>,
}

impl ResultTable {
    pub fn row(&self, cell: &str) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.cell == cell)
    }

    /// The row with the largest final ISNR.
    pub fn best(&self) -> Option<&ResultRow> {
        self.rows.iter().max_by(|a, b| a.isnr.total_cmp(&b.isnr))
    }

    pub fn summary_csv(&self) -> String {
        let mut out = format!("{SUMMARY_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.16e},{},{},{}",
                r.cell, r.penalty, r.mu, r.param, r.isnr, r.iterations, r.status, r.file
            );
        }
        out
    }

    pub fn series_csv(&self) -> String {
        let mut out = format!("{SERIES_HEADER}\n");
        for r in &self.rows {
            for (k, v) in r.isnr_series.iter().enumerate() {
                let _ = writeln!(out, "{},{},{:.16e}", r.cell, k + 1, v);
            }
        }
        out
    }

    pub fn write(&self) -> Result<()> {
        write_atomic(&self.output.join(SUMMARY_FILE), self.summary_csv().as_bytes())?;
        write_atomic(&self.output.join(SERIES_FILE), self.series_csv().as_bytes())
    }

    /// Read back the summary and ISNR series written by [`ResultTable::write`].
    pub fn load(dir: &Path) -> Result<Self> {
        let bad = |path: &Path, reason: String| Error::MalformedCsv {
            path: path.to_path_buf(),
            reason,
        };
        let sp = dir.join(SUMMARY_FILE);
        let text = fs::read_to_string(&sp).map_err(|e| Error::io(&sp, e))?;
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(SUMMARY_HEADER) {
            return Err(bad(&sp, "unexpected header".into()));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            let c: Vec<&str> = line.split(',').collect();
            if c.len() != 8 {
                return Err(bad(&sp, format!("row {}: expected 8 columns", i + 1)));
            }
            let num = |k: usize| c[k].parse::<f64>().map_err(|e| bad(&sp, format!("row {}: {e}", i + 1)));
            rows.push(ResultRow {
                cell: c[0].to_string(),
                penalty: c[1].to_string(),
                mu: num(2)?,
                param: num(3)?,
                isnr: num(4)?,
                iterations: c[5].parse().map_err(|e| bad(&sp, format!("row {}: {e}", i + 1)))?,
                status: c[6].to_string(),
                file: c[7].to_string(),
                isnr_series: Vec::new(),
            });
        }

        let tp = dir.join(SERIES_FILE);
        let text = fs::read_to_string(&tp).map_err(|e| Error::io(&tp, e))?;
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(SERIES_HEADER) {
            return Err(bad(&tp, "unexpected header".into()));
        }
        for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            let c: Vec<&str> = line.split(',').collect();
            if c.len() != 3 {
                return Err(bad(&tp, format!("row {}: expected 3 columns", i + 1)));
            }
            let v = c[2].parse::<f64>().map_err(|e| bad(&tp, format!("row {}: {e}", i + 1)))?;
            let row = rows
                .iter_mut()
                .find(|r| r.cell == c[0])
                .ok_or_else(|| bad(&tp, format!("row {}: unknown cell `{}`", i + 1, c[0])))?;
            row.isnr_series.push(v);
        }
        Ok(ResultTable {
            output: dir.to_path_buf(),
            rows,
            failures: Vec::new(),
        })
    }
}

/// Parallelism cap from `DCPROX_THREADS`; `None` when unset or invalid.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Ground truth for an experiment.
pub fn load_original(image: &ImageSource) -> Result<DenseVector> {
    match image {
        ImageSource::Synthetic { seed, rows, cols } => synthetic_texture(Shape::image(*rows, *cols), *seed),
        ImageSource::File(path) => read_pgm(path),
    }
}

struct Shared {
    original: DenseVector,
    observed: DenseVector,
    blur: Arc<dyn LinearMap>,
}

fn run_cell(cfg: &ExperimentConfig, shared: &Shared, spec: &ModelSpec) -> Result<ResultRow> {
    let cell = cell_name(spec);
    let problem = assemble_model(spec, shared.blur.clone(), &shared.observed)?;
    let run_cfg = RunConfig {
        record_timing: cfg.record_timing,
        ..RunConfig::new(spec.steps()).max_iters(cfg.iterations).certificates(cfg.certificates)
    };
    let mut series = Vec::with_capacity(cfg.iterations);
    let mut isnr_err = None;
    let traj = run_with_observer(&problem, shared.observed.clone(), None, &run_cfg, |s| {
        match isnr(&shared.original, &shared.observed, &s.x) {
            Ok(v) => series.push(v),
            Err(e) => isnr_err = Some(e),
        }
    })?;
    if let Some(e) = isnr_err {
        return Err(e);
    }
    let file = format!("{cell}.csv");
    traj.write(&cfg.output.join(&file))?;
    Ok(ResultRow {
        cell,
        penalty: spec.penalty.tag().to_string(),
        mu: spec.mu,
        param: spec.penalty.param(),
        isnr: series.last().copied().unwrap_or(0.0),
        iterations: traj.len(),
        status: traj.status.as_str().to_string(),
        file,
        isnr_series: series,
    })
}

fn run_log(cfg: &ExperimentConfig, original: &DenseVector) -> String {
    let mut log = String::new();
    let s = original.shape();
    let _ = writeln!(log, "image: {:?} ({}x{})", cfg.image, s.rows, s.cols);
    let _ = writeln!(
        log,
        "blur: std_dev={} boundary={:?} radius={}",
        cfg.blur.std_dev,
        cfg.blur.boundary,
        cfg.blur.radius()
    );
    let _ = writeln!(log, "noise: std={} seed={}", cfg.noise_std, cfg.noise_seed);
    let _ = writeln!(log, "iterations: {}  certificates: {:?}", cfg.iterations, cfg.certificates);
    for spec in &cfg.grid {
        // ||L|| = 1 so β = 1/μ
        let beta = 1.0 / spec.mu;
        let g = spec.step_size();
        let rule = match cfg.step {
            StepRule::Auto => "1/(8 mu)",
            StepRule::Fixed(_) => "fixed",
        };
        let _ = writeln!(
            log,
            "{}: {} mu={} gamma=mu_n={:e} ({rule}) beta={:e} gamma<2beta={} gamma<beta={}",
            cell_name(spec),
            spec.penalty,
            spec.mu,
            g,
            beta,
            g < 2.0 * beta,
            g < beta
        );
    }
    log
}

/// Degrade the image once, then solve every grid cell from `x0 = b` and
/// `y0 ∈ ∂h(K x0)`, writing one trajectory per cell plus the summary tables.
///
/// Cells that fail (invalid steps, certificate violations) are reported in
/// [`ResultTable::failures`] and skipped; I/O errors on the shared outputs abort.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let original = load_original(&cfg.image)?;
    let blur: Arc<dyn LinearMap> = Arc::new(GaussianBlur::new(cfg.blur, original.shape())?);
    let observed = degrade_with(&original, blur.as_ref(), cfg.noise_std, cfg.noise_seed)?.observed;
    fs::create_dir_all(&cfg.output).map_err(|e| Error::io(&cfg.output, e))?;
    write_atomic(&cfg.output.join(LOG_FILE), run_log(cfg, &original).as_bytes())?;

    let shared = Shared {
        original,
        observed,
        blur,
    };
    let solve = || -> Vec<Result<ResultRow>> { cfg.grid.par_iter().map(|spec| run_cell(cfg, &shared, spec)).collect() };
    let outcomes = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(solve),
        None => solve(),
    };

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (spec, out) in cfg.grid.iter().zip(outcomes) {
        match out {
            Ok(r) => rows.push(r),
            Err(e) => failures.push(CellFailure {
                cell: cell_name(spec),
                reason: e.to_string(),
            }),
        }
    }
    let table = ResultTable {
        output: cfg.output.clone(),
        rows,
        failures,
    };
    table.write()?;
    Ok(table)
}

/// Status of a finished cell, for callers matching on it.
pub fn parse_status(s: &str) -> Option<Status> {
    match s {
        "converged" => Some(Status::Converged),
        "max_iters" => Some(Status::MaxIters),
        "fixed_point" => Some(Status::FixedPoint),
        _ => None,
    }
}
