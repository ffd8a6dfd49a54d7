//! End-to-end runs of the `optomech-sweep` binary.

use std::path::Path;
use std::process::{Command, Output};

use optomech::sweep::read_csv;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optomech-sweep")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

const SCAN: &str = r#"{
  "base": {"delta1": 0.25, "delta2": 0.4, "g": 0.5, "J": 0.05, "E1": 0.001, "E2": 0.001,
           "kappa1": 0.3, "kappa2": 0.3, "gamma": 0.005, "nbar": 0.0},
  "layout": {"n_cav1": 3, "n_cav2": 3, "n_mech": 10},
  "engine": "both",
  "axes": [{"param": "delta1", "start": 0.1, "stop": 0.4, "count": 4}]
}"#;

// Strips the only line that may differ between identical runs.
fn without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# created:")).collect::<Vec<_>>().join("\n")
}

#[test]
fn scan_writes_csv_and_sidecar_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.json", SCAN);
    let mut texts = Vec::new();
    for run in ["a", "b"] {
        let prefix = dir.path().join(run);
        let out = bin(&["scan-delta1", "--config", &cfg, "--out", prefix.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(prefix.with_extension("json").exists());
        texts.push(std::fs::read_to_string(prefix.with_extension("csv")).unwrap());
    }
    assert_eq!(without_timestamp(&texts[0]), without_timestamp(&texts[1]));
    let t = read_csv(&texts[0]).unwrap();
    assert_eq!(t.columns, ["delta1", "S1", "S2", "g2_1", "g2_2", "engine", "residual", "tail", "flags"]);
    assert_eq!(t.records.len(), 8);
    assert!(t.comments.iter().any(|c| c == "# command: scan-delta1"));
}

#[test]
fn point_prints_to_stdout_and_honours_overrides() {
    let out = bin(&["point", "--engine", "analytic", "--set", "g=0", "--set", "J=0.03"]);
    assert!(out.status.success());
    let t = read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.records.len(), 1);
    assert_eq!(t.values("g2_1").unwrap()[0], Some(1.0));
}

#[test]
fn j_order_and_m_max_flags_change_results() {
    let run = |extra: &[&str]| {
        let mut args = vec!["point", "--engine", "analytic"];
        args.extend_from_slice(extra);
        let out = bin(&args);
        assert!(out.status.success());
        read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap().values("g2_1").unwrap()[0].unwrap()
    };
    let resummed = run(&[]);
    assert_ne!(run(&["--j-order", "1"]), resummed);
    assert_eq!(run(&["--j-order", "resummed"]), resummed);
    assert_ne!(run(&["--m-max", "3"]), resummed);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "bad.json", r#"{"engine": "both", "color": "red"}"#);
    assert_eq!(bin(&["point", "--config", &unknown]).status.code(), Some(2));
    assert_eq!(bin(&["point", "--set", "nope=1"]).status.code(), Some(2));
    assert_eq!(bin(&["point", "--set", "kappa1=-1"]).status.code(), Some(2));
    // Scans without the axis they scan.
    assert_eq!(bin(&["scan-delta1", "--engine", "analytic"]).status.code(), Some(2));
    assert_eq!(bin(&["grid-min-g2", "--engine", "analytic"]).status.code(), Some(2));
    assert_eq!(bin(&["scan-g", "--engine", "analytic"]).status.code(), Some(2));
    assert_eq!(bin(&["compare", "--engine", "analytic"]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(bin(&["point", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_rows_set_exit_codes_3_and_4() {
    // The analytic engine refuses thermal mechanics, so those rows fail.
    let all = bin(&["point", "--engine", "analytic", "--set", "nbar=1"]);
    assert_eq!(all.status.code(), Some(3));
    let t = read_csv(&String::from_utf8(all.stdout).unwrap()).unwrap();
    assert!(t.records[0].last().unwrap().contains("error"));

    let dir = tempfile::tempdir().unwrap();
    let mixed = write(
        dir.path(),
        "mixed.json",
        r#"{"engine": "analytic", "axes": [{"param": "nbar", "values": [0, 1]}, {"param": "delta1", "values": [0.25]}]}"#,
    );
    assert_eq!(bin(&["scan-delta1", "--config", &mixed]).status.code(), Some(4));
}

#[test]
fn grid_and_g_scans_report_argmin() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(
        dir.path(),
        "grid.json",
        r#"{"engine": "analytic", "base": {"delta1": 0.25, "delta2": 0.4, "g": 0.5, "J": 0.05, "E1": 0.001,
            "E2": 0.001, "kappa1": 0.3, "kappa2": 0.3, "gamma": 0.005, "nbar": 0.0},
            "axes": [{"param": "delta2", "values": [0.2, 0.4]}, {"param": "E2", "values": [0.001, 0.002]}],
            "minimize_over": {"param": "delta1", "start": 0.15, "stop": 0.35, "count": 5}}"#,
    );
    let out = bin(&["grid-min-g2", "--config", &grid]);
    assert!(out.status.success());
    let t = read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.records.len(), 4);
    assert!(t.values("delta1_argmin").unwrap().iter().all(|v| v.is_some()));

    let g = write(
        dir.path(),
        "g.json",
        r#"{"engine": "analytic", "relative_to_delta_g": {"delta2": 1.4},
            "axes": [{"param": "g", "values": [0.0, 0.5]}],
            "minimize_over": {"param": "delta1", "start": 0.0, "stop": 0.5, "count": 11}}"#,
    );
    let out = bin(&["scan-g", "--config", &g]);
    assert!(out.status.success());
    let t = read_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let g2 = t.values("g2_1").unwrap();
    assert_eq!(g2[0], Some(1.0));
    assert!(g2[1].unwrap() < 0.5);
}

#[test]
fn compare_writes_report_into_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.json", SCAN);
    let prefix = dir.path().join("cmp");
    let out = bin(&["compare", "--config", &cfg, "--out", prefix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(prefix.with_extension("json")).unwrap()).unwrap();
    assert!(side["comparison"]["g2_1"]["max"].as_f64().unwrap() < 0.05);
    assert_eq!(side["command"], "compare");
}
