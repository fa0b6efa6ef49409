use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dcprox::harness::{
    emit_isnr_curves, run_experiment, trajectory_files, verify_certificates, ExperimentConfig, ResultTable,
};
use dcprox::Error;

/// Double-proximal DC solver: experiment sweeps and certificate checks.
#[derive(Parser)]
#[command(name = "dcprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the parameter sweep described by a key=value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-check descent, summability and residual bounds of every trajectory in a directory.
    Verify { dir: PathBuf },
    /// Write per-cell (iteration, isnr) curves from a finished run.
    Curves {
        /// Comma-separated cell names, e.g. lzox_20_0p4,lzox_20_0.
        #[arg(long, value_delimiter = ',')]
        cells: Vec<String>,
        /// Directory holding summary.csv and isnr_series.csv.
        #[arg(long, default_value = "results")]
        dir: PathBuf,
        /// Where to write the curves (defaults to --dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const FAILURE: u8 = 1;
const CONFIG_ERROR: u8 = 2;

fn run(config: PathBuf, output: Option<PathBuf>) -> u8 {
    let mut cfg = match ExperimentConfig::from_file(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return CONFIG_ERROR;
        }
    };
    if let Some(o) = output {
        cfg.output = o;
    }
    let table = match run_experiment(&cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            // an unreadable or malformed input image is a configuration problem
            return match e {
                Error::ImageFormat(_) | Error::Config(_) | Error::InvalidParameter(_) => CONFIG_ERROR,
                Error::Io { ref path, .. } if !path.starts_with(&cfg.output) => CONFIG_ERROR,
                _ => FAILURE,
            };
        }
    };
    println!("{:<24} {:>8} {:>8} {:>12} {:>6}  status", "cell", "mu", "param", "isnr", "iters");
    for r in &table.rows {
        println!("{:<24} {:>8} {:>8} {:>12.5} {:>6}  {}", r.cell, r.mu, r.param, r.isnr, r.iterations, r.status);
    }
    if let Some(best) = table.best() {
        println!("best: {} (ISNR {:.5})", best.cell, best.isnr);
    }
    for f in &table.failures {
        eprintln!("cell {} failed: {}", f.cell, f.reason);
    }
    if table.failures.is_empty() {
        0
    } else {
        FAILURE
    }
}

fn verify(dir: PathBuf) -> u8 {
    let files = match trajectory_files(&dir) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return CONFIG_ERROR;
        }
    };
    let mut failed = false;
    for rep in verify_certificates(&files) {
        match &rep.result {
            Ok(v) if v.passed() => println!("PASS {} ({} rows)", rep.path.display(), v.rows),
            Ok(v) => {
                failed = true;
                let viol = v.violation.as_ref().expect("failed verdict has a violation");
                println!("FAIL {} at n={} [{}]: {}", rep.path.display(), viol.row, viol.check, viol.detail);
            }
            Err(e) => {
                failed = true;
                println!("FAIL {}: {e}", rep.path.display());
            }
        }
    }
    if files.is_empty() {
        println!("no trajectory files in {}", dir.display());
    }
    if failed {
        FAILURE
    } else {
        0
    }
}

fn curves(cells: Vec<String>, dir: PathBuf, out: Option<PathBuf>) -> u8 {
    let table = match ResultTable::load(&dir) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return CONFIG_ERROR;
        }
    };
    let out = out.unwrap_or(dir);
    if let Err(e) = std::fs::create_dir_all(&out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return FAILURE;
    }
    match emit_isnr_curves(&table, &cells, &out) {
        Ok(rep) => {
            for p in &rep.written {
                println!("wrote {}", p.display());
            }
            for c in &rep.missing {
                eprintln!("missing cell: {c}");
            }
            if rep.ok() {
                0
            } else {
                FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, output } => run(config, output),
        Command::Verify { dir } => verify(dir),
        Command::Curves { cells, dir, out } => curves(cells, dir, out),
    };
    ExitCode::from(code)
}
