use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rigidity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sigma0_default_reports_four() {
    let out = rigidity(&["sigma0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "sigma0_root")
        .unwrap();
    let sigma0 = check["measured"]["sigma0"].as_f64().unwrap();
    assert!((sigma0 - 4.0).abs() <= 1e-9);
    assert_eq!(report["summary"]["failed"], 0);
}

#[test]
fn non_symmetric_matrix_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"kind": "symm", "matrix": [[1, 2], [0, 1]]}"#,
    );
    let out = rigidity(&["symm", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("symmetric"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "unknown.json", r#"{"kind": "symm", "colour": 1}"#);
    assert_eq!(rigidity(&["symm", "--config", &unknown]).status.code(), Some(2));
    let mismatch = write(dir.path(), "mismatch.json", r#"{"kind": "growth"}"#);
    assert_eq!(rigidity(&["symm", "--config", &mismatch]).status.code(), Some(2));
    assert_eq!(
        rigidity(&["symm", "--config", "/nonexistent/x.json"]).status.code(),
        Some(2)
    );
    assert_eq!(rigidity(&["symm", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(rigidity(&["symm", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(rigidity(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "g.json",
        r#"{"kind": "growth", "growth": {"expect": "subquadratic"}}"#,
    );
    let out = rigidity(&["growth", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["failed"], 1);
}

#[test]
fn equal_seeds_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["residual-scan", "sigma0", "verify-example"] {
        let a = dir.path().join(format!("{sub}-a.json"));
        let b = dir.path().join(format!("{sub}-b.json"));
        for p in [&a, &b] {
            let out = rigidity(&[sub, "--seed", "17", "--out", p.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{sub}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{sub}");
    }
}

#[test]
fn seed_changes_random_sampling() {
    let a = rigidity(&["residual-scan", "--seed", "1", "--format", "csv"]);
    let b = rigidity(&["residual-scan", "--seed", "2", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn csv_dump_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "v.json",
        r#"{"kind": "verify-example",
            "operator": {"example": {"n": 2, "q": 0.5}},
            "sampling": {"grid": {"lower": [-5, -5], "upper": [5, 5], "counts": [11, 11]}}}"#,
    );
    let out = rigidity(&["verify-example", "--config", &cfg, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,residual,S1,S2,min_eig"));
    assert_eq!(lines.count(), 121);
}

#[test]
fn report_paths_in_config_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let cfg = write(
        dir.path(),
        "s.json",
        &format!(
            r#"{{"kind": "residual-scan", "output": {{"report": "{}", "csv": "{}"}}}}"#,
            report.display(),
            csv.display()
        ),
    );
    let out = rigidity(&["residual-scan", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&report).unwrap(), out.stdout);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("x1,x2,residual"));
}

#[test]
fn tol_override_is_echoed() {
    let out = rigidity(&["verify-example", "--tol", "1e-9"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["scenario"]["tolerances"]["residual"].as_f64(), Some(1e-9));
}

#[test]
fn shipped_scenarios_pass() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let kind = cfg["kind"].as_str().unwrap();
        let out = rigidity(&[kind, "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 6);
}
