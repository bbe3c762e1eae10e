use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kneading(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneading"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const GOLDEN_TENT: &str = r#"{"family":"tent","shape":"+-","p":[0.8090169943749475]}"#;

#[test]
fn kneading_of_golden_tent() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "map.json", GOLDEN_TENT);
    let v = json(&kneading(&["kneading", &map, "--depth", "12"]));
    assert_eq!(v["sequences"][0], "(I1.I0.C1)");
    assert_eq!(v["admissible"], true);
}

#[test]
fn entropy_methods_agree_on_golden_tent() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "map.json", GOLDEN_TENT);
    let log_rho = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    for method in ["adm", "neg", "markov"] {
        let v = json(&kneading(&["entropy", &map, "--method", method, "--depth", "14"]));
        let h = v["estimate"]["value"].as_f64().unwrap();
        assert!((h - log_rho).abs() < 0.06, "{method}: {h}");
    }
}

#[test]
fn markov_table() {
    let dir = tempfile::tempdir().unwrap();
    let orbit = write(
        dir.path(),
        "orbit.json",
        r#"{"points":[0.30901699437494745,0.5,0.8090169943749475],"images":[0.5,0.8090169943749475,0.30901699437494745]}"#,
    );
    let v = json(&kneading(&["markov", &orbit]));
    assert_eq!(v["matrix"]["entries"], serde_json::json!([[0, 1], [1, 1]]));
    assert_eq!(v["determinants"][3].as_str().unwrap().trim_start_matches('-'), "1");
}

#[test]
fn bone_on_tent_segment() {
    let v = json(&kneading(&["bone", "--family", "tent", "--period", "3", "--range", "0.7,0.9", "--tol", "1e-12"]));
    let p = v[0]["p"][0].as_f64().unwrap();
    assert!((p - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-9);
}

#[test]
fn scan_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("raster");
    let base = base.to_str().unwrap();
    let v = json(&kneading(&[
        "scan", "--family", "cubic", "--shape", "-+-", "--res", "5", "--depth", "6", "--out", base, "--workers", "2",
    ]));
    assert_eq!(v["summary"]["populated"], 15);
    for ext in ["pgm", "csv", "json"] {
        assert!(Path::new(&format!("{base}.{ext}")).exists());
    }
    let pgm = std::fs::read_to_string(format!("{base}.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n5 5\n255\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let outside = write(dir.path(), "bad.json", r#"{"family":"tent","shape":"+-","p":[1.5]}"#);
    assert_eq!(kneading(&["entropy", &outside]).status.code(), Some(2));
    let garbled = write(dir.path(), "garbled.json", "{");
    assert_eq!(kneading(&["kneading", &garbled]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(kneading(&["kneading", missing.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(kneading(&["scan", "--family", "tent"]).status.code(), Some(2));
    // not postcritically finite
    let open = write(dir.path(), "open.json", r#"{"family":"tent","shape":"+-","p":[0.85]}"#);
    assert_eq!(kneading(&["entropy", &open, "--method", "markov"]).status.code(), Some(2));
    // too shallow for the estimator
    let out = kneading(&["entropy", &open, "--depth", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}
