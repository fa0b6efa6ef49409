//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comments start with '#'
//! preset     = desk          # desk (64x64, blur 2) or large (256x256, blur 9)
//! image      = synthetic     # or a path to an 8-bit PGM
//! seed       = 0             # synthetic texture seed
//! rows       = 64
//! cols       = 64
//! blur_std   = 2
//! blur_boundary = periodic   # or symmetric
//! noise_std  = 0.19607843137254902
//! noise_seed = 1
//! penalty    = lzox          # lzox, zhang, scad (comma list allowed)
//! mu         = 10, 20, 50
//! param      = 0, 0.4, 1     # α (lzox), a (zhang), λ (scad)
//! scad_a     = 3.7
//! iterations = 50
//! step       = auto          # 1/(8μ), or a number
//! inner_tol  = 1e-4
//! max_inner  = 500
//! warm_start = true
//! certificates = descent     # off, descent, full
//! timing     = false
//! output     = results
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::funcs::TvSettings;
use crate::imaging::{Boundary, BlurSpec, ModelSpec, Penalty};
use crate::solver::CertificateMode;

#[derive(Debug, Clone, PartialEq)]
pub enum ImageSource {
    Synthetic { seed: u64, rows: usize, cols: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// `γ = μ_n = 1 / (8 μ)`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub image: ImageSource,
    pub blur: BlurSpec,
    pub noise_std: f64,
    pub noise_seed: u64,
    pub grid: Vec<ModelSpec>,
    pub iterations: usize,
    pub step: StepRule,
    pub certificates: CertificateMode,
    pub record_timing: bool,
    pub output: PathBuf,
}

pub const DEFAULT_NOISE_STD: f64 = 50.0 / 255.0;

const KEYS: &[&str] = &[
    "preset",
    "image",
    "seed",
    "rows",
    "cols",
    "blur_std",
    "blur_boundary",
    "blur_radius",
    "noise_std",
    "noise_seed",
    "penalty",
    "mu",
    "param",
    "scad_a",
    "iterations",
    "step",
    "inner_tol",
    "max_inner",
    "warm_start",
    "certificates",
    "timing",
    "output",
];

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| cfg_err(format!("`{key}`: cannot parse `{v}`: {e}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(cfg_err(format!("`{key}` needs at least one value")));
    }
    Ok(out)
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(cfg_err(format!("`{key}`: expected a boolean, got `{v}`"))),
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| cfg_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim().to_ascii_lowercase(), v.trim().to_string());
            if !KEYS.contains(&k.as_str()) {
                return Err(cfg_err(format!("line {}: unknown key `{k}`", lineno + 1)));
            }
            if kv.insert(k.clone(), v).is_some() {
                return Err(cfg_err(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);

        let (mut size, mut blur_std) = (64usize, 2.0);
        match get("preset").unwrap_or("desk") {
            "desk" => {}
            "large" => {
                size = 256;
                blur_std = 9.0;
            }
            other => return Err(cfg_err(format!("`preset`: expected desk or large, got `{other}`"))),
        }

        let image = match get("image").unwrap_or("synthetic") {
            "synthetic" => ImageSource::Synthetic {
                seed: get("seed").map(|v| parse_num("seed", v)).transpose()?.unwrap_or(0),
                rows: get("rows").map(|v| parse_num("rows", v)).transpose()?.unwrap_or(size),
                cols: get("cols").map(|v| parse_num("cols", v)).transpose()?.unwrap_or(size),
            },
            path => {
                for k in ["seed", "rows", "cols"] {
                    if kv.contains_key(k) {
                        return Err(cfg_err(format!("`{k}` only applies to the synthetic image")));
                    }
                }
                ImageSource::File(PathBuf::from(path))
            }
        };

        let boundary = match get("blur_boundary").unwrap_or("periodic") {
            "periodic" => Boundary::Periodic,
            "symmetric" => Boundary::Symmetric,
            other => return Err(cfg_err(format!("`blur_boundary`: expected periodic or symmetric, got `{other}`"))),
        };
        let blur = BlurSpec {
            std_dev: get("blur_std").map(|v| parse_num("blur_std", v)).transpose()?.unwrap_or(blur_std),
            boundary,
            radius: get("blur_radius").map(|v| parse_num("blur_radius", v)).transpose()?,
        };
        blur.taps().map_err(|e| cfg_err(e.to_string()))?;

        let noise_std: f64 = get("noise_std").map(|v| parse_num("noise_std", v)).transpose()?.unwrap_or(DEFAULT_NOISE_STD);
        if !(noise_std >= 0.0 && noise_std.is_finite()) {
            return Err(cfg_err(format!("`noise_std` must be >= 0, got {noise_std}")));
        }
        let noise_seed = get("noise_seed").map(|v| parse_num("noise_seed", v)).transpose()?.unwrap_or(1);

        let iterations: usize = get("iterations").map(|v| parse_num("iterations", v)).transpose()?.unwrap_or(50);
        if iterations == 0 {
            return Err(cfg_err("`iterations` must be >= 1"));
        }
        let step = match get("step").unwrap_or("auto") {
            "auto" => StepRule::Auto,
            v => {
                let s: f64 = parse_num("step", v)?;
                if !(s > 0.0 && s.is_finite()) {
                    return Err(cfg_err(format!("`step` must be > 0, got {s}")));
                }
                StepRule::Fixed(s)
            }
        };
        let certificates = match get("certificates").unwrap_or("descent") {
            "off" => CertificateMode::Off,
            "descent" => CertificateMode::Descent,
            "full" => CertificateMode::Full,
            other => return Err(cfg_err(format!("`certificates`: expected off, descent or full, got `{other}`"))),
        };
        let defaults = TvSettings::default();
        let tv = TvSettings {
            inner_tol: get("inner_tol").map(|v| parse_num("inner_tol", v)).transpose()?.unwrap_or(defaults.inner_tol),
            max_inner: get("max_inner").map(|v| parse_num("max_inner", v)).transpose()?.unwrap_or(defaults.max_inner),
            warm_start: get("warm_start").map(|v| parse_bool("warm_start", v)).transpose()?.unwrap_or(defaults.warm_start),
        };
        if !(tv.inner_tol > 0.0) || tv.max_inner == 0 {
            return Err(cfg_err("`inner_tol` must be > 0 and `max_inner` >= 1"));
        }

        let penalties: Vec<&str> = get("penalty")
            .ok_or_else(|| cfg_err("missing key `penalty`"))?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let mus = parse_list("mu", get("mu").ok_or_else(|| cfg_err("missing key `mu`"))?)?;
        let params = parse_list("param", get("param").ok_or_else(|| cfg_err("missing key `param`"))?)?;
        let scad_a: f64 = get("scad_a").map(|v| parse_num("scad_a", v)).transpose()?.unwrap_or(3.7);
        let mut grid = Vec::new();
        for tag in &penalties {
            for &mu in &mus {
                for &param in &params {
                    let penalty = match *tag {
                        "lzox" => Penalty::Lzox { alpha: param },
                        "zhang" => Penalty::Zhang { a: param },
                        "scad" => Penalty::Scad { lambda: param, a: scad_a },
                        other => return Err(cfg_err(format!("unknown penalty `{other}`"))),
                    };
                    penalty.validate().map_err(|e| cfg_err(format!("{penalty}: {e}")))?;
                    if !(mu > 0.0 && mu.is_finite()) {
                        return Err(cfg_err(format!("`mu` values must be > 0, got {mu}")));
                    }
                    let step_value = match step {
                        StepRule::Auto => None,
                        StepRule::Fixed(s) => Some(s),
                    };
                    grid.push(ModelSpec {
                        penalty,
                        mu,
                        tv,
                        step: step_value,
                    });
                }
            }
        }
        if grid.is_empty() {
            return Err(cfg_err("empty parameter grid"));
        }

        Ok(ExperimentConfig {
            image,
            blur,
            noise_std,
            noise_seed,
            grid,
            iterations,
            step,
            certificates,
            record_timing: get("timing").map(|v| parse_bool("timing", v)).transpose()?.unwrap_or(false),
            output: PathBuf::from(get("output").unwrap_or("results")),
        })
    }
}
