//! End-to-end tests of the command-line binary: scenario runs, figure
//! emission, config diagnostics, exit codes, and output determinism.

use std::path::Path;
use std::process::Command;

use salpeter::cli::output::read_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_salpeter"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn run_emits_oracle_columns_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "lorentzian.cfg",
        "scenario=free_massless_lorentzian\n\
         grid.n=1024\n\
         grid.l=400\n\
         times=0,1,2\n\
         outputs=rho,j,norm\n\
         output.path=lorentzian.csv\n",
    );
    let out = bin().arg("run").arg(&cfg).current_dir(dir.path()).output().unwrap();
    assert!(
        out.status.success(),
        "run failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv_path = dir.path().join("lorentzian.csv");
    let table = read_csv(&csv_path).unwrap();
    for col in ["x", "t", "rho_num", "rho_exact", "j_num", "j_exact"] {
        assert!(table.column(col).is_some(), "missing column {col}");
    }
    assert_eq!(table.rows(), 3 * 1024);
    let worst = table
        .column("rho_num")
        .unwrap()
        .iter()
        .zip(table.column("rho_exact").unwrap())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max)
        ;
    // coarse 1024-point grid; the floor is the box periodization of the
    // packet's power-law tails
    assert!(worst <= 1e-3, "density oracle gap {worst:.3e}");

    let first = std::fs::read(&csv_path).unwrap();
    let out2 = bin().arg("run").arg(&cfg).current_dir(dir.path()).output().unwrap();
    assert!(out2.status.success());
    let second = std::fs::read(&csv_path).unwrap();
    assert_eq!(first, second, "re-run output is not bit-identical");
}

#[test]
fn invalid_config_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.cfg",
        "scenario=linear_potential\nparams.lambda=-1\n",
    );
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("params.lambda"), "diagnostic missing field name: {err}");
}

#[test]
fn missing_config_file_exits_2() {
    let out = bin().arg("run").arg("/nonexistent/path.cfg").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_emission_and_range_check() {
    let dir = tempfile::tempdir().unwrap();
    let f3 = dir.path().join("fig3.csv");
    let out = bin().arg("figure").arg("3").arg("--out").arg(&f3).output().unwrap();
    assert!(out.status.success());
    let t3 = read_csv(&f3).unwrap();
    assert!(t3.column("x").is_some() && t3.column("rho_plus").is_some());

    let f7 = dir.path().join("fig7.csv");
    let out = bin().arg("figure").arg("7").arg("--out").arg(&f7).output().unwrap();
    assert!(out.status.success());
    let t7 = read_csv(&f7).unwrap();
    for col in ["t", "mean_x", "classical"] {
        assert!(t7.column(col).is_some(), "missing column {col}");
    }

    for n in ["0", "11"] {
        let out = bin().arg("figure").arg(n).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "figure {n} should be rejected");
    }
}

#[test]
fn figure_param_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let out = bin()
        .arg("figure").arg("1")
        .arg("--out").arg(&path)
        .arg("--param").arg("a=2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let t = read_csv(&path).unwrap();
    // at t=0 the normalized density is (2a^3/pi)/(x^2+a^2)^2 with peak
    // 2/(pi a)
    let peak = t
        .column("t").unwrap().iter()
        .zip(t.column("rho").unwrap())
        .filter(|(&tt, _)| tt == 0.0)
        .map(|(_, &r)| r)
        .fold(0.0f64, f64::max);
    let want = 1.0 / std::f64::consts::PI;
    assert!((peak - want).abs() <= 1e-3, "peak {peak} vs {want}");
}

#[test]
fn validate_fast_reports_and_exits_nonzero_on_known_floors() {
    let out = bin().arg("validate").arg("--suite").arg("fast").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(lines.len(), 12, "expected 12 check lines:\n{text}");
    // two checks sit on documented accuracy floors above their nominal
    // targets, so the suite honestly reports failure
    assert_eq!(out.status.code(), Some(1));
    for name in ["free_massless_oracle", "linear_potential"] {
        assert!(
            lines.iter().any(|l| l.starts_with("FAIL") && l.contains(name)),
            "expected {name} to be the failing check:\n{text}"
        );
    }
    assert_eq!(
        lines.iter().filter(|l| l.starts_with("FAIL")).count(),
        2,
        "only the documented floors may fail:\n{text}"
    );
}

#[test]
fn help_and_version_exit_zero() {
    for args in [vec!["--help"], vec!["--version"], vec!["figure", "--help"]] {
        let out = bin().args(&args).output().unwrap();
        assert!(out.status.success(), "{args:?} exited nonzero");
    }
}
