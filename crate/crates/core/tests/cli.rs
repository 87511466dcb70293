use std::path::Path;
use std::process::{Command, Output};

fn momx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momx")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = momx(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    momx(args).status.code().unwrap()
}

/// `(row, column, value)` triples of the long CSV layout.
fn csv_cells(text: &str) -> Vec<(String, String, String)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.rsplitn(3, ',').collect();
            let head: Vec<&str> = f[2].splitn(4, ',').collect();
            (head[2].to_string(), head[3].trim_matches('"').to_string(), f[1].to_string())
        })
        .collect()
}

fn json_values(text: &str) -> Vec<String> {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    let mut out = Vec::new();
    for s in v["sections"].as_array().unwrap() {
        for r in s["rows"].as_array().unwrap() {
            for c in r["cells"].as_array().unwrap() {
                out.push(c["value"].as_str().unwrap_or("").to_string());
            }
        }
    }
    out
}

fn cell(text: &str, row: &str, column: &str) -> String {
    csv_cells(text)
        .into_iter()
        .find(|(r, c, _)| r == row && c == column)
        .unwrap_or_else(|| panic!("no cell {row}/{column} in\n{text}"))
        .2
}

fn eigenstate_file(dir: &Path) -> String {
    let path = dir.join("eigen.json");
    std::fs::write(
        &path,
        r#"{"name": "ho_ground", "potential": ["0", "0", "1"], "trial_poly": ["3"], "alpha": "1/2"}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["match"]), 0);
    assert_eq!(code(&["match", "--problem", "nope"]), 2);
    assert_eq!(code(&["match", "--order", "0"]), 2);
    assert_eq!(code(&["match", "--order", "4..2"]), 2);
    assert_eq!(code(&["match", "--precision", "10"]), 2);
    assert_eq!(code(&["match", "--bogus"]), 2);
    assert_eq!(code(&["table", "13"]), 2);
    assert_eq!(code(&["table", "0"]), 2);
    assert_eq!(code(&["moments", "--jmax", "0"]), 2);
    assert_eq!(code(&["moments", "--jmax", "500"]), 2);
    assert_eq!(code(&["dynamics", "--steps", "0"]), 2);
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"name\": \"x\",\n \"potential\": [\"0.5\"]").unwrap();
    assert_eq!(code(&["match", "--problem", broken.to_str().unwrap()]), 2);
    let eigen = eigenstate_file(dir.path());
    assert_eq!(code(&["overlap", "--problem", &eigen, "--order", "2"]), 3);
    assert_eq!(code(&["cmx", "--problem", &eigen, "--order", "2"]), 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "11", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    for cmd in [vec!["table", "3"], vec!["match", "--order", "2..4"], vec!["knowles", "--order", "1..5"]] {
        let mut csv = cmd.clone();
        csv.extend(["--format", "csv"]);
        let mut json = cmd.clone();
        json.extend(["--format", "json"]);
        let a: Vec<String> = csv_cells(&stdout(&csv)).into_iter().map(|c| c.2).collect();
        assert_eq!(a, json_values(&stdout(&json)), "{cmd:?}");
    }
}

#[test]
fn moments_are_exact() {
    let out = stdout(&["moments", "--jmax", "3", "--format", "csv"]);
    assert_eq!(cell(&out, "0", "nu_j"), "1");
    assert_eq!(cell(&out, "1", "nu_j"), "41/40");
    assert_eq!(cell(&out, "2", "nu_j"), "1843/1600");
    // mu_0 = sqrt(π/β), β = 4/5
    assert!(cell(&out, "0", "mu_j").starts_with("1.981663648803005506672514382560"));
}

#[test]
fn anchor_values() {
    let out = stdout(&["overlap", "--problem", "aho_g", "--order", "4", "--format", "csv"]);
    assert_eq!(cell(&out, "4", "S_N^2"), "0.9444538767");
    let out = stdout(&["cmx", "--variant", "u", "--problem", "ho_e", "--order", "5", "--format", "csv"]);
    let b0 = cell(&out, "0", "b_j");
    assert!(b0.starts_with("0.000388975219"), "{b0}");
    let out = stdout(&["knowles", "--problem", "ho_e", "--order", "10", "--format", "csv"]);
    assert_eq!(cell(&out, "10", "A_{0,M}"), "4.999999154");
    let out = stdout(&["knowles", "--order", "3", "--format", "csv"]);
    assert!(cell(&out, "3", "A_{0,M}").starts_with("1.0000000"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t1.md");
    assert_eq!(code(&["table", "1", "--out", path.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("1.969393168"), "{text}");
}

fn dyn_rows(text: &str) -> Vec<[f64; 4]> {
    text.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

#[test]
fn dynamics_matches_the_fitted_model() {
    let tau = std::f64::consts::TAU.to_string();
    let rows = dyn_rows(&stdout(&["dynamics", "--order", "3", "--tmax", &tau, "--steps", "4"]));
    assert_eq!(rows.len(), 5);
    let mu0 = 1.981663649;
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - mu0).abs() < 1e-9 && rows[0][2] == 0.0);
    let fit = stdout(&["match", "--order", "3", "--format", "csv"]);
    let (mut re, mut im) = (0.0, 0.0);
    for j in 0..3 {
        let w: f64 = cell(&fit, &j.to_string(), "W_j").parse().unwrap();
        let d: f64 = cell(&fit, &j.to_string(), "d_j").parse().unwrap();
        re += d * (w * std::f64::consts::TAU).cos();
        im -= d * (w * std::f64::consts::TAU).sin();
    }
    let last = rows[4];
    assert!((last[1] - re).abs() < 1e-7 && (last[2] - im).abs() < 1e-7, "{last:?} vs {re} {im}");
    assert!((last[3] - (re * re + im * im)).abs() < 1e-7);
}

#[test]
fn eigenstate_survival_probability_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let eigen = eigenstate_file(dir.path());
    let rows = dyn_rows(&stdout(&["dynamics", "--problem", &eigen, "--order", "3", "--steps", "7"]));
    let mu0_sq = rows[0][3];
    for r in &rows {
        assert!((r[3] / mu0_sq - 1.0).abs() < 1e-9, "{r:?}");
    }
    let fit = stdout(&["match", "--problem", &eigen, "--order", "3"]);
    assert!(fit.contains("reduced to order 1"), "{fit}");
}
