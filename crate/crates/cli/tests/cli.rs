use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ntn-coherence"));
    c.env_remove("NTN_COHERENCE_THREADS");
    c
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--output").arg(out).output().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {text}"))
}

#[test]
fn invalid_epsilon_is_a_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["tc", "--preset", "default", "--rician-k", "0", "--epsilon", "1.5"], dir.path());
    assert!(!o.status.success());
    assert_eq!(stderr_json(&o)["error"], "invalid_epsilon");
    assert!(!dir.path().join("tc.csv").exists());
}

#[test]
fn missing_k_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["curve", "--preset", "default"], dir.path());
    assert!(!o.status.success());
    let e = stderr_json(&o);
    assert_eq!(e["error"], "config_error");
    assert_eq!(e["field"], "scenario.rician_k");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"preset": "default", "bogus": 1}"#).unwrap();
    let o = run(&["curve", "--rician-k", "0", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(!o.status.success());
    let e = stderr_json(&o);
    assert_eq!(e["error"], "config_error");
    assert!(e["message"].as_str().unwrap().contains("bogus"));
}

#[test]
fn not_reached_row_has_empty_time() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["tc", "--preset", "default", "--rician-k", "inf", "--epsilon", "0.5", "--ppd", "20"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tc = fs::read_to_string(dir.path().join("tc.csv")).unwrap();
    assert_eq!(tc, "axis_value,epsilon,tc_s,status\n,5.00000000e-1,,not_reached\n");
    let curve = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let lines: Vec<&str> = curve.lines().collect();
    assert_eq!(lines[0], "tau_s,re,im,abs");
    assert_eq!(lines[1], "0.00000000e0,1.00000000e0,0.00000000e0,1.00000000e0");
    // 7 decades at 20 per decade, both ends included, plus the origin row
    assert_eq!(lines.len(), 1 + 1 + 141);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"preset": "default", "scenario": null, "epsilon": 0.9,
            "grid": {"tau_min": "1 us", "tau_max": "1 ms", "points_per_decade": 20}}"#,
    )
    .unwrap();
    let o = run(
        &["tc", "--config", cfg.to_str().unwrap(), "--rician-k", "0", "--epsilon", "0.5"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "tc");
    assert_eq!(m["config"]["epsilon"], 0.5);
    assert!(m["version"].as_str().unwrap().starts_with('v'));
    let tc = fs::read_to_string(dir.path().join("tc.csv")).unwrap();
    assert!(tc.lines().nth(1).unwrap().starts_with(",5.00000000e-1,"));
    let curve = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 2 + 61);
    assert!(curve.lines().nth(2).unwrap().starts_with("1.00000000e-6,"));
}

#[test]
fn json_output_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["curve", "--preset", "static-bs", "--rician-k", "1", "--ppd", "20", "--tau-max", "1e-6", "--format", "json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("curve.json")).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows[0]["abs"], 1.0);
    assert_eq!(rows.len(), 1 + 61);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sweep", "--preset", "default", "--rician-k", "0.3", "--sweep-axis", "bs_speed",
        "--sweep-values", "0 km/s,7 km/s", "--epsilon", "0.5", "--ppd", "20"];
    for (dir, threads) in [(&a, "1"), (&b, "2")] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--threads", threads]);
        let o = run(&full, dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["sweep_curves.csv", "sweep_tc.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn mc_check_writes_one_row_per_lag() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["mc-check", "--preset", "default", "--mc-n", "200", "--mc-m", "50", "--mc-points", "4", "--seed", "7"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("mc_check.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "tau_s,quad_re,quad_im,mc_re,mc_im,se_re,se_im,z");
    assert_eq!(lines.len(), 5);
}
