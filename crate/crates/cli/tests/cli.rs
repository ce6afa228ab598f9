use std::process::{Command, Output};

use serde_json::Value;

fn cdcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdcurv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

const HARDY: &str = r#"{"family":"power","m":1,"k":1}"#;
const BERGMAN: &str = r#"{"family":"power","m":1,"k":2}"#;
const LOG: &str = r#"{"family":"logplus","m":1}"#;

#[test]
fn kernel_summaries() {
    let v = json(&cdcurv(&["kernel", "--kernel", HARDY]));
    assert_eq!(v["result"]["coefficients"].as_array().unwrap().len(), 10);
    assert!(v["result"]["coefficients"].as_array().unwrap().iter().all(|a| a == 1.0));
    assert_eq!(v["result"]["inverse_coefficients"], serde_json::json!([1, -1]));

    let v = json(&cdcurv(&["kernel", "--kernel", r#"{"family":"power","m":2,"k":3}"#]));
    assert_eq!(v["result"]["inverse_coefficients"], serde_json::json!([1, -3, 3, -1]));
    assert_eq!(v["config"]["kernels"][0]["k"], 3);

    let v = json(&cdcurv(&["kernel", "--kernel", LOG]));
    let a3 = v["result"]["coefficients"][3].as_f64().unwrap();
    assert!((a3 - (1.0 + 1.0 + 0.5 + 1.0 / 3.0)).abs() < 1e-14);
    assert!(v["result"]["inverse_coefficients"].is_null());
}

#[test]
fn kernel_from_file() {
    let dir = std::env::temp_dir().join(format!("cdcurv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bergman.json");
    std::fs::write(&path, BERGMAN).unwrap();
    let v = json(&cdcurv(&["kernel", "--kernel", path.to_str().unwrap()]));
    assert_eq!(v["result"]["coefficients"][4], 5.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hardy_curvature_column() {
    let out = cdcurv(&["curvature", "--kernel", HARDY, "--grid", "radial:1:1:0.8:9", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    let col = header.iter().position(|h| h == "K[1][1][1][1]_re").unwrap();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let r = row[0];
        let exact = -1.0 / (1.0 - r * r).powi(2);
        assert!((row[col] - exact).abs() <= 1e-5 * exact.abs(), "r = {r}");
    }
}

#[test]
fn constant_metric_is_flat() {
    let out = cdcurv(&["curvature", "--metric", "constant", "--m", "2", "--rank", "2", "--grid", "lattice:2:3:0.5", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header.len(), 4 + 2 * 16);
    for row in rows {
        assert!(row[4..].iter().all(|v| *v == 0.0));
    }
}

#[test]
fn power_four_on_the_ball_at_origin() {
    let out = cdcurv(&[
        "curvature",
        "--kernel",
        r#"{"family":"power","m":2,"k":4}"#,
        "--grid",
        "point:0,0,0,0",
    ]);
    let v = json(&out);
    let blocks = &v["result"]["curvature"][0]["blocks"];
    let entry = |b: usize| blocks[b][0][0][0].as_f64().unwrap();
    assert!((entry(0) + 4.0).abs() < 1e-5);
    assert!((entry(3) + 4.0).abs() < 1e-5);
    assert!(entry(1).abs() < 1e-5 && entry(2).abs() < 1e-5);
}

#[test]
fn truncated_metric_matches_closed_form() {
    let closed = json(&cdcurv(&["curvature", "--kernel", BERGMAN, "--grid", "radii:1:1:0.3"]));
    let trunc = json(&cdcurv(&["curvature", "--kernel", BERGMAN, "--metric", "truncated", "--n", "60", "--grid", "radii:1:1:0.3"]));
    let a = closed["result"]["curvature"][0]["blocks"][0][0][0][0].as_f64().unwrap();
    let b = trunc["result"]["curvature"][0]["blocks"][0][0][0][0].as_f64().unwrap();
    assert!((a - b).abs() < 1e-6 * a.abs());
    assert_eq!(trunc["config"]["truncation"], 60);
}

#[test]
fn similarity_verdicts() {
    let same = json(&cdcurv(&["similarity", "--kernel", HARDY, "--kernel", HARDY]));
    assert_eq!(same["result"]["outcome"]["kind"], "bounded_ratios");
    assert_eq!(same["result"]["outcome"]["c1"], 1.0);
    assert_eq!(same["result"]["outcome"]["c2"], 1.0);

    let up = json(&cdcurv(&["similarity", "--kernel", HARDY, "--kernel", BERGMAN]));
    assert_eq!(up["result"]["outcome"]["kind"], "divergent_ray");
    assert_eq!(up["result"]["outcome"]["direction"], "up");

    let down = json(&cdcurv(&["similarity", "--kernel", LOG, "--kernel", HARDY]));
    assert_eq!(down["result"]["outcome"]["direction"], "down");
    assert_eq!(down["result"]["outcome"]["exit"], 11);
}

#[test]
fn scan_of_rescaled_kernel_is_one() {
    let doubled = format!(
        r#"{{"family":"tabulated","m":1,"coeffs":{:?},"growth":{{"C":2,"p":0}}}}"#,
        vec![2.0; 200]
    );
    let out = cdcurv(&["scan", "--kernel", &doubled, "--kernel", HARDY, "--grid", "radii:1:1:0,0.3,0.5", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["r", "step", "ratio"]);
    for row in rows {
        assert!((row[2] - 1.0).abs() < 1e-6, "{row:?}");
    }
}

#[test]
fn reproduce_examples() {
    for id in ["fb2", "hs-identity", "tensor-lemma"] {
        let out = cdcurv(&["reproduce", id]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(out.status.success(), "{id}: {text}");
        assert!(text.lines().last() == Some("pass"), "{id}: {text}");
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn reproduce_writes_report() {
    let dir = std::env::temp_dir().join(format!("cdcurv-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fb2.json");
    let out = cdcurv(&["reproduce", "fb2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["config"]["options"]["id"], "fb2");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cdcurv(args).status.code().unwrap();
    assert_eq!(code(&["curvature", "--kernel", HARDY, "--grid", "radii:1:1:1.2"]), 2);
    assert_eq!(code(&["curvature", "--kernel", HARDY, "--metric", "truncated", "--n", "5", "--grid", "radii:1:1:0.9"]), 4);
    assert_eq!(code(&["kernel", "--kernel", r#"{"family":"power","m":1"#]), 5);
    assert_eq!(code(&["kernel", "--kernel", r#"{"family":"power","m":0,"k":1}"#]), 5);
    assert_eq!(code(&["similarity", "--kernel", HARDY, "--kernel", HARDY, "--format", "csv"]), 5);
    assert_eq!(code(&["reproduce", "unknown"]), 64);
    assert_eq!(code(&["bogus"]), 64);
    assert_eq!(code(&["similarity", "--kernel", HARDY]), 64);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["curvature", "--kernel", r#"{"family":"power","m":2,"k":2}"#, "--grid", "lattice:2:4:0.8"];
    let a = cdcurv(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_cdcurv"))
        .args(args)
        .env("CDCURV_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let r1 = cdcurv(&["reproduce", "det-lemma", "--seed", "7", "--format", "json", "--out", "/dev/stdout"]);
    let r2 = cdcurv(&["reproduce", "det-lemma", "--seed", "7", "--format", "json", "--out", "/dev/stdout"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn bad_thread_count_is_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_cdcurv"))
        .args(["curvature", "--kernel", HARDY])
        .env("CDCURV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}
