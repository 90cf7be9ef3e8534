use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tws")).args(args).output().expect("tws runs")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name).display().to_string()
}

fn out_dir(tmp: &TempDir) -> (PathBuf, String) {
    let p = tmp.path().join("out");
    let s = p.display().to_string();
    (p, s)
}

#[test]
fn catalog_lists_every_family() {
    let out = tws(&["catalog", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 8);
    let one = tws(&["catalog", "--family", "sine_gordon"]);
    assert!(String::from_utf8_lossy(&one.stdout).starts_with("sine_gordon"));
}

#[test]
fn unknown_family_is_an_input_error() {
    assert_eq!(tws(&["catalog", "--family", "nope"]).status.code(), Some(2));
}

#[test]
fn melnikov_writes_curve_and_zeros() {
    let tmp = TempDir::new().unwrap();
    let (dir, d) = out_dir(&tmp);
    let out = tws(&["melnikov", &scenario("toy_single.json"), "--out", &d, "--plot-data"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("melnikov.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("h,M,quad_error"));
    assert_eq!(lines.count(), 64);
    assert!(!csv.contains('\r'));
    let zeros: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("zeros.json")).unwrap()).unwrap();
    let h = zeros["zeros"]["zeros"][0]["h_star"].as_f64().unwrap();
    assert!((h - 2.0 / 3.0).abs() < 1e-6);
    assert!(dir.join("melnikov.dat").exists());
}

#[test]
fn csv_values_round_trip() {
    let tmp = TempDir::new().unwrap();
    let (dir, d) = out_dir(&tmp);
    assert!(tws(&["melnikov", &scenario("kdv.json"), "--out", &d]).status.success());
    let csv = fs::read_to_string(dir.join("melnikov.csv")).unwrap();
    for line in csv.lines().skip(1) {
        for field in line.split(',') {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:e}"), field);
        }
    }
}

#[test]
fn design_writes_coefficients() {
    let tmp = TempDir::new().unwrap();
    let (dir, d) = out_dir(&tmp);
    let out = tws(&["design", &scenario("harmonic_three_zeros.json"), "--out", &d]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("coefficients.json")).unwrap()).unwrap();
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 4);
    assert_eq!(v["verification"]["zeros"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_reports_convergence() {
    let tmp = TempDir::new().unwrap();
    let (dir, d) = out_dir(&tmp);
    let out = tws(&[
        "--threads", "2", "verify", &scenario("toy_single.json"), "--out", &d,
        "--epsilon", "1e-3", "--seeds", "24",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.join("convergence.csv")).unwrap();
    let row: Vec<&str> = table.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "1");
    assert!(row[2].parse::<f64>().unwrap() < 5e-2);
    assert!(dir.join("cycles_0.json").exists());
}

#[test]
fn epsilon_above_cap_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let (_, d) = out_dir(&tmp);
    let out = tws(&["verify", &scenario("toy_single.json"), "--out", &d, "--epsilon", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_writes_samples() {
    let tmp = TempDir::new().unwrap();
    let (dir, d) = out_dir(&tmp);
    let out = tws(&["profile", &scenario("ostrovsky.json"), "--out", &d, "--samples", "33"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.join("profile.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("s,U"));
    assert_eq!(csv.lines().count(), 34);
}

#[test]
fn profile_energy_outside_annulus_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let (_, d) = out_dir(&tmp);
    let out = tws(&["profile", &scenario("ostrovsky.json"), "--out", &d, "--h", "5.0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_scenario_names_the_field() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("bad.json");
    fs::write(&path, r#"{"schema": "1", "family": "toy", "gird": {}}"#).unwrap();
    let (_, d) = out_dir(&tmp);
    let out = tws(&["melnikov", &path.display().to_string(), "--out", &d]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gird"));
}

#[test]
fn every_sample_scenario_parses() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        tws_persist::scenario::Scenario::load(&path).unwrap();
    }
}

fn write_scenario(tmp: &TempDir, name: &str, body: &str) -> String {
    let path = tmp.path().join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn zero_perturbation_has_no_zeros() {
    let tmp = TempDir::new().unwrap();
    let sc = write_scenario(&tmp, "z.json", r#"{"schema": "1", "family": "toy", "perturbation": {"kind": "zero"}}"#);
    let (dir, d) = out_dir(&tmp);
    assert!(tws(&["melnikov", &sc, "--out", &d]).status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("zeros.json")).unwrap()).unwrap();
    assert!(v["zeros"]["zeros"].as_array().unwrap().is_empty());
}

#[test]
fn duplicate_weight_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let sc = write_scenario(
        &tmp,
        "dup.json",
        r#"{"schema": "1", "family": "toy", "targets": [0.5], "exponents": [[0, 2], [1, 1]]}"#,
    );
    let (_, d) = out_dir(&tmp);
    let out = tws(&["design", &sc, "--out", &d]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate weight"));
}

#[test]
fn zero_epsilon_flags_degenerate_continuum() {
    let tmp = TempDir::new().unwrap();
    let (dir, d) = out_dir(&tmp);
    let out = tws(&["verify", &scenario("toy_single.json"), "--out", &d, "--epsilon", "0", "--seeds", "8"]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("cycles_0.json")).unwrap()).unwrap();
    assert_eq!(v["degenerate_continuum"], serde_json::Value::Bool(true));
}

#[test]
fn near_separatrix_profile_warns_of_period_overflow() {
    let tmp = TempDir::new().unwrap();
    let sc = write_scenario(
        &tmp,
        "sg.json",
        r#"{"schema": "1", "family": "sine_gordon", "params": {"c": 1.4142135623730951}}"#,
    );
    let (dir, d) = out_dir(&tmp);
    let out = tws(&["profile", &sc, "--out", &d, "--h", "1.999999", "--samples", "16"]);
    assert!(out.status.success());
    let json = fs::read_to_string(dir.join("profile.json")).unwrap();
    assert!(json.contains("PeriodOverflow"), "{json}");
}

#[test]
fn outputs_are_deterministic_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a").display().to_string();
    let b = tmp.path().join("b").display().to_string();
    let sc = scenario("harmonic_three_zeros.json");
    assert!(tws(&["--threads", "1", "verify", &sc, "--out", &a, "--seeds", "32"]).status.success());
    assert!(tws(&["--threads", "4", "verify", &sc, "--out", &b, "--seeds", "32"]).status.success());
    for f in ["convergence.csv", "cycles_0.json", "cycles_1.json", "cycles_2.json"] {
        let x = fs::read(Path::new(&a).join(f)).unwrap();
        let y = fs::read(Path::new(&b).join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}
