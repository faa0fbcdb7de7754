//! End-to-end tests of the `sticky` binary: artifact shape, determinism,
//! config-file override precedence and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn sticky(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sticky"))
        .args(args)
        .output()
        .expect("spawn sticky")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn kernel_csv_shape_and_conservation() {
    let out = sticky(&["kernel", "--t", "0.5,2", "--x", "0,1", "--y-points", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# sticky kernel table"));
    assert_eq!(lines.next().unwrap(), "t,x,y,density,atom,mass");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2 * 2 * 5);
    for row in &rows {
        assert_eq!(row.len(), 6);
        let (density, atom, mass) = (row[3], row[4], row[5]);
        assert!(density >= 0.0 && atom > 0.0);
        assert!((mass - 1.0).abs() < 1e-9, "mass {mass}");
    }
}

#[test]
fn simulate_is_deterministic_in_the_seed() {
    let args = [
        "simulate",
        "--sampler",
        "exact",
        "--dim",
        "2",
        "--x0",
        "0.5",
        "--paths",
        "50",
        "--steps",
        "20",
        "--seed",
        "11",
    ];
    let a = stdout(&sticky(&args));
    let b = stdout(&sticky(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["config"]["dim"], 2);
    assert_eq!(v["config"]["x0"], serde_json::json!([0.5, 0.5]));
    assert_eq!(v["terminal_mean"].as_array().unwrap().len(), 2);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));

    let mut other = args;
    *other.last_mut().unwrap() = "12";
    let c = stdout(&sticky(&other));
    assert_ne!(a, c, "different seeds must give different ensembles");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join("sticky-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sim.json");
    std::fs::write(&cfg, r#"{"sampler": "exact", "paths": 30, "steps": 10, "seed": 5}"#).unwrap();
    let base = stdout(&sticky(&["simulate", "--config", cfg.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&base).unwrap();
    assert_eq!(v["config"]["paths"], 30);
    let over = stdout(&sticky(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--paths",
        "40",
    ]));
    let v: serde_json::Value = serde_json::from_str(&over).unwrap();
    assert_eq!(v["config"]["paths"], 40, "flag must beat config file");
    assert_eq!(v["config"]["seed"], 5, "untouched fields come from the file");
}

#[test]
fn girsanov_artifact_reports_mean_weight_diagnostic() {
    let out = sticky(&[
        "girsanov",
        "--model",
        "gaussian",
        "--paths",
        "300",
        "--steps",
        "50",
        "--functional",
        "one",
        "--seed",
        "2",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let est = v["estimate"].as_f64().unwrap();
    let z = v["mean_weight_z"].as_f64().unwrap();
    assert!((est - 1.0).abs() < 0.2, "E[Z] estimate {est}");
    assert!(z.abs() < 5.0, "mean weight z {z}");
}

#[test]
fn validate_passes_and_writes_artifact() {
    let dir = std::env::temp_dir().join("sticky-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("validate.json");
    let out = sticky(&[
        "validate",
        "--samples",
        "1000",
        "--seed",
        "4",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["suite"], "validate");
    assert!(!v["report"]["checks"].as_array().unwrap().is_empty());
}

#[test]
fn wetting_reports_conditions() {
    let out = sticky(&["wetting", "--dim", "3", "--potential", "quadratic"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["report"]["conditions"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_with_code_2() {
    assert_eq!(sticky(&["kernel", "--y-points", "1"]).status.code(), Some(2));
    assert_eq!(sticky(&["simulate", "--sampler", "warp"]).status.code(), Some(2));
    assert_eq!(
        sticky(&["simulate", "--config", "/nonexistent/cfg.json"]).status.code(),
        Some(2)
    );
    // unknown config keys are rejected, not silently ignored
    let dir = std::env::temp_dir().join("sticky-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"pahts": 30}"#).unwrap();
    assert_eq!(
        sticky(&["simulate", "--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert!(Path::new(env!("CARGO_BIN_EXE_sticky")).exists());
}
