//! The double-proximal DC iteration, its energy certificates, and run-level
//! diagnostics.

mod diagnostics;
mod iteration;
mod problem;
mod run;
mod steps;
mod trajectory;

pub use diagnostics::{rate_fit, rate_fit_sequence, summability_report, RateFit, Regime, Summability};
pub use iteration::{criticality_residual, dc_step, CertificateMode, SolverState, StepInfo, ENERGY_SLACK};
pub use problem::{pd_energy, DcProblem};
pub use run::{run, run_with_observer, RunConfig};
pub use steps::{Schedule, StepSizes};
pub use trajectory::{
    meta_path, parse_trajectory_csv, read_trajectory, CsvRow, IterRecord, RecordedTrajectory, Status, StepSummary,
    Trajectory, TrajectoryMeta, CSV_HEADER,
};

pub(crate) use trajectory::write_atomic;
