use std::path::PathBuf;
use std::process::{Command, Output};

use relent::gallery::{gallery, Params};
use relent::mahavier::rasterize;
use relent::Relation;

fn relent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relent")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn entropy_floor_on_h_ab() {
    let o = relent(&["entropy", "--relation", "gallery:H_ab", "--grid", "256", "--max-m", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["spectral"]["lower"].as_f64().unwrap() >= 0.1733);
    assert_eq!(v["counts"].as_array().unwrap().len(), 10);
}

#[test]
fn orbits_and_certify_examples() {
    let o = relent(&["orbits", "--relation", "gallery:H_thm2", "--max-period", "12"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["proof_level"], "proven");
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
    let o = relent(&["certify", "--relation", "gallery:counterexample"]);
    assert_eq!(stdout(&o).trim(), "none (exhaustive)");
}

#[test]
fn exit_codes() {
    let o = relent(&["report", "--relation", "gallery:H_ab"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"verdict\": \"i_embedded\""));

    // a bitmap has no orbit census, so its verdict stays inconclusive
    let grid = scratch("tent-grid.json");
    std::fs::write(&grid, rasterize(&gallery("tent", &Params::default()).unwrap(), 8).to_json()).unwrap();
    let o = relent(&["report", "--relation", grid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"verdict\": \"inconclusive\""));

    let o = relent(&["gallery", "taletoti", "--param", "a=3/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("a must be in (1,√2)"));
    let o = relent(&["orbits", "--relation", "/nonexistent/relation.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gallery_file_round_trip_and_params() {
    let o = relent(&["gallery", "H_ab", "--param", "a=1+sqrt(2)", "b=1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("h_ab.json");
    std::fs::write(&path, stdout(&o)).unwrap();
    let r = Relation::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let expected = gallery("H_ab", &Params { a: None, b: Some(relent::Scalar::rational(1, 4)) }).unwrap();
    assert_eq!(r, expected);
    assert_eq!(r.to_json() + "\n", stdout(&o));
    let from_file = relent(&["certify", "--relation", path.to_str().unwrap()]);
    assert!(stdout(&from_file).contains("\"b\""));
}

#[test]
fn plot_is_deterministic_and_writes_out() {
    let out = scratch("plot.svg");
    let o = relent(&["plot", "--relation", "gallery:taletoti", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    let again = stdout(&relent(&["plot", "--relation", "gallery:taletoti"]));
    assert_eq!(first, again);
    let o = relent(&["plot", "--relation", "gallery:full_shift", "--prefix-m", "3"]);
    assert!(stdout(&o).contains("16 sequences"));
    let o = relent(&["plot", "--relation", "gallery:full_shift", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn conjugate_with_homeo_file() {
    let phi = scratch("phi.json");
    std::fs::write(&phi, relent::gallery::joj5_phi().to_json()).unwrap();
    let o = relent(&["conjugate", "--relation", "gallery:joj5_B", "--homeo", phi.to_str().unwrap(), "--grid", "8", "--max-m", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["transfer"]["mode"], "exact");
    assert_eq!(v["transfer"]["agree"], true);
    let mapped = Relation::from_json(&v["relation"].to_string()).unwrap();
    assert_eq!(mapped, gallery("joj5_A", &Params::default()).unwrap());
}

#[test]
fn csv_and_sweep() {
    let o = relent(&["entropy", "--relation", "gallery:tent", "--format", "csv", "--max-m", "4", "--grid", "16"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    let o = relent(&["entropy", "--relation", "gallery:tent", "--sweep", "16,32", "--format", "csv"]);
    assert!(stdout(&o).starts_with("n,spectral,lower,upper\n16,"));
}
