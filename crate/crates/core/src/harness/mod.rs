//! Experiment sweeps: degrade an image, solve a parameter grid, tabulate
//! ISNR, and re-verify the recorded certificates.

mod config;
mod curves;
mod experiment;
mod verify;

pub use config::{ExperimentConfig, ImageSource, StepRule, DEFAULT_NOISE_STD};
pub use curves::{curve_file_name, emit_isnr_curves, CurvesReport, CURVE_HEADER};
pub use experiment::{
    cell_name, load_original, number_token, parse_status, run_experiment, thread_cap, CellFailure, ResultRow,
    ResultTable, LOG_FILE, SERIES_FILE, SERIES_HEADER, SUMMARY_FILE, SUMMARY_HEADER, THREADS_ENV,
};
pub use verify::{check_recorded, trajectory_files, verify_certificates, verify_file, Verdict, VerifyReport, Violation};
