use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use stfan_core::moduli::{marker_lengths, IngredientList, TruncatedSeries};
use stfan_core::polygeom::polygon_realizing_fan;
use stfan_core::rational::to_f64;
use stfan_core::semitoric::standard_fan;
use tempfile::TempDir;

fn stfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stfan")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ingredients(c: usize, h_frac: f64) -> IngredientList {
    let p = polygon_realizing_fan(&standard_fan(c)).unwrap();
    let h = marker_lengths(&p).iter().map(|l| to_f64(l) * h_frac).collect();
    IngredientList::new(p, h, vec![TruncatedSeries::zero(6); c]).unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.json", r#"{"vectors":[[1,0],[0,1],[-1,-1]]}"#);
    assert_eq!(stfan(&["validate", s(&tri)]).status.code(), Some(0));

    let twice = write(&dir, "twice.json", r#"{"vectors":[[1,0],[0,1],[-1,-1],[1,0],[-1,1],[0,-1]]}"#);
    let out = stfan(&["validate", s(&twice)]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["failure"], "winding=2");

    let bad = write(&dir, "bad.json", "{vectors: oops");
    assert_eq!(stfan(&["validate", s(&bad)]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(stfan(&["validate", s(&missing)]).status.code(), Some(2));
}

#[test]
fn validate_semitoric_and_polygon() {
    let dir = TempDir::new().unwrap();
    let fan = write(&dir, "std2.json", &serde_json::to_string(&standard_fan(2)).unwrap());
    let out = stfan(&["validate", s(&fan)]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["complexity"], 2);

    let poly = polygon_realizing_fan(&standard_fan(1)).unwrap();
    let p = write(&dir, "p.json", &serde_json::to_string(&poly).unwrap());
    assert_eq!(stfan(&["validate", s(&p)]).status.code(), Some(0));
    let slanted = write(&dir, "slanted.json", r#"{"vertices":[["0","0"],["1/2","0"],[0,1]]}"#);
    assert_eq!(stfan(&["validate", s(&slanted)]).status.code(), Some(1));
}

#[test]
fn reduce_reports_model_and_trace() {
    let dir = TempDir::new().unwrap();
    let fan = write(&dir, "chopped.json", r#"{"vectors":[[1,0],[2,1],[1,1],[0,1],[-1,0],[0,-1]]}"#);
    let trace = dir.path().join("trace.json");
    let out = stfan(&["reduce", s(&fan), "--verify", "--trace", s(&trace)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "Hirzebruch(1), 2 moves");
    let t: Value = serde_json::from_str(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert!(t.is_object());

    let semi = write(&dir, "semi.json", &serde_json::to_string(&standard_fan(1)).unwrap());
    assert_eq!(stfan(&["reduce", s(&semi)]).status.code(), Some(1));
}

#[test]
fn normalize_standard_fan() {
    let dir = TempDir::new().unwrap();
    let fan = write(&dir, "std2.json", &serde_json::to_string(&standard_fan(2)).unwrap());
    let out = stfan(&["normalize", s(&fan), "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "standard c=2, 0 moves");
}

#[test]
fn enumerate_with_census_and_check() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("census.csv");
    let out = stfan(&["enumerate", "--d", "4", "--bound", "2", "--csv", s(&csv), "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = std::fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + v["count"].as_u64().unwrap() as usize);
    assert!(rows.starts_with("word,d,weight,winding,minimal_model"));
    assert!(stfan(&["enumerate", "--d", "4", "--bound", "-1"]).status.code() != Some(0));
}

#[test]
fn distance_of_identical_inputs_is_zero() {
    let dir = TempDir::new().unwrap();
    let m = serde_json::to_string(&ingredients(1, 0.5)).unwrap();
    let a = write(&dir, "a.json", &m);
    let b = write(&dir, "b.json", &m);
    let out = stfan(&["distance", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["distance"].as_f64(), Some(0.0));
    assert_eq!(v["measure"], "exp_abs_x");

    let poly = serde_json::to_string(&polygon_realizing_fan(&standard_fan(1)).unwrap()).unwrap();
    let p = write(&dir, "p.json", &poly);
    let out = stfan(&["distance", s(&p), s(&p), "--measure", "lebesgue"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exact"], "0");
}

#[test]
fn distance_rejects_component_mismatch() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &serde_json::to_string(&ingredients(1, 0.5)).unwrap());
    let b = write(&dir, "b.json", &serde_json::to_string(&ingredients(2, 0.5)).unwrap());
    assert_eq!(stfan(&["distance", s(&a), s(&b)]).status.code(), Some(1));
    let mixed = write(&dir, "p.json", &serde_json::to_string(&polygon_realizing_fan(&standard_fan(1)).unwrap()).unwrap());
    assert_eq!(stfan(&["distance", s(&a), s(&mixed)]).status.code(), Some(1));
}

#[test]
fn path_endpoints_match_inputs() {
    let dir = TempDir::new().unwrap();
    let (m, n) = (ingredients(1, 0.25), ingredients(1, 0.75));
    let a = write(&dir, "a.json", &serde_json::to_string(&m).unwrap());
    let b = write(&dir, "b.json", &serde_json::to_string(&n).unwrap());
    let out_path = dir.path().join("path.json");
    let out = stfan(&["path", s(&a), s(&b), "--steps", "20", "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let samples: Vec<IngredientList> = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(samples.len(), 21);
    assert_eq!(samples[0], m);
    assert_eq!(samples[20], n);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["max_step_distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn render_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let fan = write(&dir, "std3.json", &serde_json::to_string(&standard_fan(3)).unwrap());
    let (x, y) = (dir.path().join("x.svg"), dir.path().join("y.svg"));
    assert_eq!(stfan(&["render", s(&fan), "--out", s(&x)]).status.code(), Some(0));
    assert_eq!(stfan(&["render", s(&fan), "--out", s(&y)]).status.code(), Some(0));
    let (x, y) = (std::fs::read_to_string(x).unwrap(), std::fs::read_to_string(y).unwrap());
    assert_eq!(x, y);
    assert_eq!(x.matches("<text").count(), 3);
}

#[test]
fn output_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &serde_json::to_string(&ingredients(2, 0.3)).unwrap());
    let b = write(&dir, "b.json", &serde_json::to_string(&ingredients(2, 0.6)).unwrap());
    let runs: Vec<Output> = (0..2).map(|_| stfan(&["distance", s(&a), s(&b)])).collect();
    assert_eq!(runs[0].status.code(), Some(0));
    // caps must cover the stored series
    assert_eq!(stfan(&["distance", s(&a), s(&b), "--degree", "4"]).status.code(), Some(1));
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let runs: Vec<Output> = (0..2).map(|_| stfan(&["enumerate", "--d", "5", "--bound", "2"])).collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
}
