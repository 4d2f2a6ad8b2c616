use std::path::Path;
use std::process::{Command, Output};

fn nleg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nleg"))
        .args(args)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn catalog_lists_and_describes() {
    let all = nleg(&["catalog"]);
    assert_eq!(all.status.code(), Some(0));
    let text = stdout(&all);
    for name in ["abelian(3)", "heisenberg3", "su2", "so3", "sl2r", "direct_sum(su2,su2)"] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
    let one = stdout(&nleg(&["catalog", "su2"]));
    let row = one.lines().nth(1).unwrap();
    assert!(
        row.contains(" 3 ") && row.contains("semisimple") && row.contains("(0,3,0)"),
        "{row}"
    );

    let bad = nleg(&["catalog", "nosuch"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("nosuch"));
}

#[test]
fn verify_group_frame_passes_on_su2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = nleg(&[
        "verify",
        "theorem1",
        "--algebra",
        "su2",
        "--lambda",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["points"].as_array().unwrap().len(), 20);
    assert_eq!(report["model"]["family"], "gl-born-infeld");
    assert_eq!(report["metadata"]["seed"], 42);
    assert!(report["metadata"]["timestamp"].is_null());
    assert_eq!(report["convergence"].as_array().unwrap().len(), 2);

    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let rows = csv_rows(&csv);
    assert_eq!(
        rows[0],
        ["x0", "x1", "x2", "max_abs", "frobenius", "degenerate", "signature"]
    );
    assert_eq!(rows.len(), 21);
    assert!(rows[1..].iter().all(|r| r[6] == "0;3;0"));
}

#[test]
fn verify_deformed_frame_reports_signature_and_metric_form() {
    let o = nleg(&["verify", "theorem2", "--algebra", "sl2r", "--rho", "exp"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for s in report["signature"].as_array().unwrap() {
        assert_eq!(s, &serde_json::json!([3, 1, 0]));
    }
    assert_eq!(report["metric_form"]["verdict"], "pass");
    let rate = report["expansion"]["h_rate"].as_f64().unwrap();
    assert!((rate + 2.0).abs() < 1e-6, "{rate}");

    let o = nleg(&[
        "verify",
        "theorem2",
        "--algebra",
        "su2",
        "--rho",
        "affine",
        "--variant",
        "e-prime",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(
        nleg(&["verify", "theorem1", "--algebra", "heisenberg3"]).status.code(),
        Some(2)
    );
    assert_eq!(nleg(&["verify", "theorem1"]).status.code(), Some(2));
    assert_eq!(
        nleg(&["verify", "theorem1", "--algebra", "su2", "--family", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nleg(&["verify", "theorem2", "--algebra", "su2", "--rho", "cosh"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(nleg(&["frobnicate"]).status.code(), Some(2));
    // Too few points to pass, and an unattainable tolerance.
    assert_eq!(
        nleg(&["verify", "theorem1", "--algebra", "su2", "--points", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        nleg(&["verify", "theorem1", "--algebra", "su2", "--tol", "1e-16"])
            .status
            .code(),
        Some(1)
    );
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    write(
        &cfg,
        r#"{"algebra": "sl2r", "lambda": 2.0, "mu": 0.5, "nu": -0.3, "seed": 7, "points": 21}"#,
    );
    let o = nleg(&["verify", "theorem1", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["metadata"]["seed"], 9);
    assert_eq!(report["metadata"]["count"], 21);
    assert_eq!(report["model"]["parameters"]["lambda"], 2.0);

    write(&cfg, r#"{"algebra": "su2", "lamda": 2.0}"#);
    let o = nleg(&["verify", "theorem1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lamda"));
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify",
        "theorem2",
        "--algebra",
        "su2",
        "--rho",
        "exp2",
        "--seed",
        "11",
    ];
    let a = nleg(&args);
    let b = nleg(&args);
    assert_eq!(a.stdout, b.stdout);

    let stamped = Command::new(env!("CARGO_BIN_EXE_nleg"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&stamped.stdout).unwrap();
    assert_eq!(report["metadata"]["timestamp"], "1700000000");
}

#[test]
fn invariants_table() {
    let o = nleg(&["invariants", "--algebra", "su2", "--points", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["x0", "x1", "x2", "j1", "j2", "j3", "density", "signature"]);
    assert_eq!(rows.len(), 8);
    for r in &rows[1..] {
        assert!(r[5].parse::<f64>().unwrap().abs() < 1e-12, "{r:?}");
    }

    let o = nleg(&["invariants", "--algebra", "abelian(3)", "--points", "4"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    for r in &rows[1..] {
        for v in &r[3..7] {
            assert!(v.parse::<f64>().unwrap().abs() < 1e-20, "{r:?}");
        }
    }
}

#[test]
fn profile_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("profile.csv");
    let o = nleg(&[
        "profile",
        "--a",
        "1",
        "--b",
        "4",
        "--r-max",
        "5",
        "--steps",
        "500",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows[0], ["r", "f"]);
    assert_eq!(rows.len(), 502);
    let vals: Vec<(f64, f64)> = rows[1..]
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    assert_eq!(vals[0], (0.0, 0.0));
    assert!(vals.windows(2).all(|w| w[1].1 > w[0].1));
    let slope = vals[1].1 / vals[1].0;
    assert!((slope - 2.0).abs() < 1e-6, "{slope}");

    assert_eq!(nleg(&["profile", "--a", "-1"]).status.code(), Some(2));
}
