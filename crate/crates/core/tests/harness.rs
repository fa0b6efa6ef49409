//! Sweep harness and command-line behaviour.

use std::fs;
use std::path::Path;
use std::process::Command;

use dcprox::harness::*;

const SMALL: &str = "rows = 16\ncols = 16\npenalty = zhang, lzox\nmu = 20\nparam = 0.3\niterations = 6\n";

fn dcprox() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dcprox"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("exp.cfg");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn single_iteration_smoke() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse("rows = 16\ncols = 16\npenalty = lzox\nmu = 20\nparam = 0.4\niterations = 1\n").unwrap();
    cfg.output = tmp.path().to_path_buf();
    let t = run_experiment(&cfg).unwrap();
    assert_eq!(t.rows.len(), 1);
    let row = &t.rows[0];
    assert_eq!(row.cell, "lzox_20_0p4");
    assert_eq!(row.iterations, 1);
    assert!(row.isnr.is_finite());
    for f in [SUMMARY_FILE, SERIES_FILE, LOG_FILE] {
        assert!(tmp.path().join(f).is_file(), "{f}");
    }
    let files = trajectory_files(tmp.path()).unwrap();
    assert_eq!(files.len(), 1);
    assert!(verify_certificates(&files).iter().all(|r| r.passed()));
}

#[test]
fn table_round_trips_through_disk() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse(SMALL).unwrap();
    cfg.output = tmp.path().to_path_buf();
    let t = run_experiment(&cfg).unwrap();
    let back = ResultTable::load(tmp.path()).unwrap();
    assert_eq!(back.rows.len(), t.rows.len());
    for (a, b) in t.rows.iter().zip(&back.rows) {
        assert_eq!(a.cell, b.cell);
        assert_eq!(a.isnr, b.isnr);
        assert_eq!(a.isnr_series, b.isnr_series);
    }
}

#[test]
fn corrupted_trajectory_fails_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse(SMALL).unwrap();
    cfg.output = tmp.path().to_path_buf();
    run_experiment(&cfg).unwrap();
    let files = trajectory_files(tmp.path()).unwrap();
    assert_eq!(files.len(), 2);

    // raise the energy of the last row: descent must break
    let path = &files[0];
    let text = fs::read_to_string(path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|h| *h == "phi").unwrap();
    let last = lines.len() - 1;
    let mut fields: Vec<String> = lines[last].split(',').map(String::from).collect();
    let phi: f64 = fields[col].parse().unwrap();
    fields[col] = format!("{:e}", phi + 1.0 + phi.abs());
    lines[last] = fields.join(",");
    fs::write(path, lines.join("\n") + "\n").unwrap();

    let reps = verify_certificates(&files);
    assert!(!reps[0].passed());
    assert!(reps[1].passed());
    let out = dcprox().arg("verify").arg(tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn empty_or_garbled_file_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path().join("broken.csv");
    fs::write(&p, "").unwrap();
    assert!(verify_file(&p).is_err());
    fs::write(&p, "n,phi\n1,abc\n").unwrap();
    assert!(verify_file(&p).is_err());
    let out = dcprox().arg("verify").arg(tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn curves_for_known_and_unknown_cells() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse(SMALL).unwrap();
    cfg.output = tmp.path().to_path_buf();
    let t = run_experiment(&cfg).unwrap();

    let cells: Vec<String> = ["zhang_20_0p3", "lzox_20_0p3"].map(String::from).to_vec();
    let rep = emit_isnr_curves(&t, &cells, tmp.path()).unwrap();
    assert!(rep.ok());
    let text = fs::read_to_string(tmp.path().join(curve_file_name("lzox_20_0p3"))).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CURVE_HEADER));
    assert_eq!(lines.count(), 6);

    let out = dcprox()
        .args(["curves", "--cells", "zhang_20_0p3,nope_1_1", "--dir"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope_1_1"));

    let out = dcprox().args(["curves", "--cells", "zhang_20_0p3,lzox_20_0p3", "--dir"]).arg(tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cli_run_and_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let cfg = write_config(tmp.path(), SMALL);
    let out = dcprox().args(["run", "--config"]).arg(&cfg).arg("--output").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("best:"));
    let out = dcprox().arg("verify").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let bad = write_config(tmp.path(), "penalty = lzox\nmu = 20\nbogus = 1\n");
    let out = dcprox().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = dcprox().args(["run", "--config"]).arg(tmp.path().join("missing.cfg")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let img = write_config(tmp.path(), &format!("image = {}\npenalty = lzox\nmu = 20\n", tmp.path().join("none.pgm").display()));
    let out = dcprox().args(["run", "--config"]).arg(&img).arg("--output").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = dcprox().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, threads) in [(&a, "1"), (&b, "4")] {
        let out = dcprox().env(THREADS_ENV, threads).args(["run", "--config"]).arg(&cfg).arg("--output").arg(dir).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    for f in fs::read_dir(&a).unwrap() {
        let name = f.unwrap().file_name();
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
}
