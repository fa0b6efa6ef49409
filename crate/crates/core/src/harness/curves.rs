use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::experiment::ResultTable;
use crate::error::Result;
use crate::solver::write_atomic;

pub const CURVE_HEADER: &str = "iteration,isnr";

/// File name of a cell's ISNR curve.
pub fn curve_file_name(cell: &str) -> String {
    format!("{cell}_isnr.csv")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CurvesReport {
    pub written: Vec<PathBuf>,
    /// Requested cells absent from the table.
    pub missing: Vec<String>,
}

impl CurvesReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Write `(iteration, isnr)` curves for the requested cells into `out_dir`.
/// Unknown cells are listed in the report; the others are still written.
pub fn emit_isnr_curves(table: &ResultTable, cells: &[String], out_dir: &Path) -> Result<CurvesReport> {
    let mut report = CurvesReport::default();
    for cell in cells {
        let Some(row) = table.row(cell) else {
            report.missing.push(cell.clone());
            continue;
        };
        let mut text = format!("{CURVE_HEADER}\n");
        for (k, v) in row.isnr_series.iter().enumerate() {
            let _ = writeln!(text, "{},{:.16e}", k + 1, v);
        }
        let path = out_dir.join(curve_file_name(cell));
        write_atomic(&path, text.as_bytes())?;
        report.written.push(path);
    }
    Ok(report)
}
