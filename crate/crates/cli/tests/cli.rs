use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ndof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndof")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("scenario.toml");
    fs::write(&path, body).unwrap();
    path
}

const LINES: &str = r#"
name = "lines"
dimension = 2
n_a = 10

[transmitter]
parts = [{ type = "segment", start = [-0.5, 0.0], end = [0.5, 0.0] }]

[receiver]
parts = [{ type = "segment", start = [-0.25, 1.0], end = [0.25, 1.0] }]
"#;

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn spectrum_writes_tables_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), LINES);
    let out = tmp.path().join("out");
    let o = ndof(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["shadow.csv", "spectrum.csv", "summary.json"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let s = summary(&out);
    assert!((s["N_a"].as_f64().unwrap() - 10.0).abs() < 1e-9);
    let n_e = s["N_e"].as_f64().unwrap();
    assert!(n_e > 7.0 && n_e < 13.0, "N_e = {n_e}");
    let spectrum = fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert!(spectrum.starts_with("n,sigma,zeta,zeta_times_Na\n"));
}

#[test]
fn json_format_switches_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), LINES);
    let out = tmp.path().join("out");
    let o = ndof(&[
        "spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("spectrum.json")).unwrap()).unwrap();
    assert!(v["zeta"].as_array().unwrap().len() > 10);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), LINES);
    let run = |name: &str, threads: &str, method: &str| {
        let out = tmp.path().join(name);
        let o = ndof(&[
            "spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
            "--threads", threads, "--method", method, "--seed", "7",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read(out.join("spectrum.csv")).unwrap(), fs::read(out.join("shadow.csv")).unwrap())
    };
    for method in ["dense", "randomized"] {
        let a = run(&format!("{method}1"), "1", method);
        let b = run(&format!("{method}8"), "8", method);
        let c = run(&format!("{method}8b"), "8", method);
        assert_eq!(a, b, "{method}: 1 vs 8 threads");
        assert_eq!(b, c, "{method}: repeated run");
    }
}

#[test]
fn validate_reports_overlap_as_violation() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"
name = "overlap"
dimension = 2
n_a = 10
[transmitter]
parts = [{ type = "disc", center = [0.0, 0.0], radius = 1.0 }]
[receiver]
parts = [{ type = "disc", center = [0.5, 0.0], radius = 1.0 }]
"#,
    );
    let o = ndof(&["validate", "--config", cfg.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["ok"], false);
    let violations = report["violations"].as_array().unwrap();
    assert!(violations.iter().any(|v| v.as_str().unwrap().contains("not disjoint")));
    assert!(!o.status.success());
}

#[test]
fn validate_accepts_clean_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), LINES);
    let o = ndof(&["validate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["ok"], true);
    // crossed strings minus uncrossed strings
    let crossed = 2.0 * (0.75f64.powi(2) + 1.0).sqrt();
    let uncrossed = 2.0 * (0.25f64.powi(2) + 1.0).sqrt();
    let lambda = (crossed - uncrossed) / 10.0;
    let got = report["wavelength"].as_f64().unwrap();
    assert!((got - lambda).abs() < 1e-6 * lambda, "{got} vs {lambda}");
}

#[test]
fn errors_are_json_on_stderr_with_nonzero_exit() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "name = \"x\"\ndimension = 4\nn_a = 1\n");
    let o = ndof(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].is_string());
    assert!(err["message"].is_string());

    let o = ndof(&["spectrum", "--config", tmp.path().join("missing.toml").to_str().unwrap()]);
    assert!(!o.status.success());
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].is_string());
}

#[test]
fn randomized_without_seed_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), LINES);
    let o = ndof(&["spectrum", "--config", cfg.to_str().unwrap(), "--method", "randomized"]);
    assert!(!o.status.success());
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("seed"));
}

#[test]
fn zero_coverage_reports_zero_ndof() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"
name = "end-fire"
dimension = 2
n_a = 10
[transmitter]
parts = [{ type = "segment", start = [0.0, 0.0], end = [1.0, 0.0] }]
[receiver]
parts = [{ type = "segment", start = [2.0, 0.0], end = [3.0, 0.0] }]
"#,
    );
    let out = tmp.path().join("out");
    let o = ndof(&["ndof", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["N_a"].as_f64().unwrap(), 0.0);
    assert!(!s["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn capacity_writes_modes_and_waterfill() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"
name = "arc"
dimension = 2
n_a = 4
[transmitter]
parts = [{ type = "disc", center = [0.0, 0.0], radius = 0.5 }]
[receiver.far_field]
phi = [0.0, 1.5707963267948966]
n = 64
[capacity]
gammas = [1.0, 10.0]
"#,
    );
    let out = tmp.path().join("out");
    let o = ndof(&["capacity", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cap = fs::read_to_string(out.join("capacity.csv")).unwrap();
    let lines: Vec<&str> = cap.lines().collect();
    assert_eq!(lines[0], "gamma,capacity_bits,active_modes");
    assert_eq!(lines.len(), 3);
    let c1: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    let c10: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!(c10 > c1 && c1 > 0.0);
    let s = summary(&out);
    assert!(s["capacity"]["trace_mismatch"].as_f64().unwrap() < 1e-8, "{}", s["capacity"]);
}

#[test]
fn reproduce_spheres_writes_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("figs");
    let o = ndof(&["reproduce", "fig_spheres_paraxial", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dir = out.join("fig_spheres_paraxial");
    let files: Vec<_> = fs::read_dir(&dir).unwrap().collect();
    assert!(!files.is_empty());
}

#[test]
fn reproduce_unknown_figure_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ndof(&["reproduce", "fig_nope", "--out", tmp.path().to_str().unwrap()]);
    assert!(!o.status.success());
}
