//! End-to-end runs of the `fullgroup` binary against golden files.
//! Set `UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fullgroup"));
    cmd.current_dir(env!("CARGO_MANIFEST_DIR")).env_remove("FULLGROUP_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str], code: i32) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    check_golden(name, &text);
    text
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn validate_constructor_and_files() {
    golden("validate_pair3.txt", &["validate", "pair:3"], 0);
    golden("validate_file.txt", &["validate", "file:tests/data/z2.json"], 0);
    let v = json(&golden("validate_broken.json", &["validate", "file:tests/data/broken.json", "--json"], 1));
    assert_eq!(v["valid"], false);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn full_group_order_and_cayley_table() {
    golden("full_group_cayley.txt", &["full-group", "union(pair:2,group:cyclic:2)", "--cayley"], 0);
    let v = json(&golden("full_group_sym3_pair2.json", &["full-group", "product(group:sym:3,pair:2)", "--json"], 0));
    assert_eq!(v["order"], "72");
    let out = run(&["full-group", "pair:5", "--cayley"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_reports() {
    let v = json(&golden("analyze_pair2.json", &["analyze", "pair:2", "--json"], 0));
    assert_eq!(v["injective"]["oracle"], true);
    assert_eq!(v["surjective"]["oracle"], false);
    assert_eq!(v["agreement"], true);
    let v = json(&golden("analyze_z2z2_witness.json", &["analyze", "union(group:cyclic:2,group:cyclic:2)", "--witness", "--json"], 0));
    assert_eq!(v["injective"]["oracle"], false);
    assert_eq!(v["witness"]["terms"].as_array().unwrap().len(), 4);
    golden("analyze_group.txt", &["analyze", "group:sym:3"], 0);
}

#[test]
fn witness_reports() {
    let v = json(&golden("witness_z2z2.json", &["witness", "union(group:cyclic:2,group:cyclic:2)", "--json"], 0));
    assert_eq!(v["case"], "isotropy-pair");
    assert_eq!(v["pi_is_zero"], true);
    golden("witness_pair3.txt", &["witness", "pair:3"], 0);
    golden("witness_pair3_chosen.txt", &["witness", "pair:3", "--pair", "p0_1", "p1_2"], 0);
    let out = run(&["witness", "pair:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("injective"));
}

#[test]
fn tmatrix_reports() {
    golden("tmatrix_pair2.txt", &["tmatrix", "pair:2", "2*delta:#0 + (1+i)*one:p0_1 - 1/2*one:#1"], 0);
    let v = json(&golden("tmatrix_pi_image.json", &["tmatrix", "union(pair:2,group:cyclic:3)", "3*delta:#1 - delta:#2", "--json"], 0));
    assert_eq!(v["row_sums"], v["column_sums"]);
    assert!(v["common_line_sum"].is_string());
}

#[test]
fn f2_bounds_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bounds.csv");
    golden("f2_bounds.txt", &["f2-bounds", "--n-max", "12", "--radius", "5", "--csv", csv.to_str().unwrap()], 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    check_golden("f2_bounds.csv", &text);
    assert!(text.starts_with("n,haagerup_rhs,paper_bound,truncated_norm\n"));
    assert_eq!(text.lines().count(), 13);
    let v = json(&golden("f2_bounds.json", &["f2-bounds", "--n-max", "6", "--radius", "3", "--json"], 0));
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn f2_bounds_hundred_rows() {
    let out = run(&["f2-bounds", "--n-max", "100", "--radius", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&stdout(&out));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 100);
    // Ball(4) has 161 elements, so every row has a truncated norm.
    assert!(rows.iter().all(|r| r["truncated_norm"].is_f64()));
}

#[test]
fn verify_summary_and_determinism() {
    let args = ["verify", "--count", "16", "--law-pairs", "20", "--line-sum-samples", "20", "--size-cap", "500"];
    golden("verify_small.txt", &args, 0);
    let one = run(&[&args[..], &["--json", "--threads", "1"]].concat());
    let three = run(&[&args[..], &["--json", "--threads", "3"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let v = json(&stdout(&one));
    assert_eq!(v["ok"], true);
    assert_eq!(v["instances"], 16);
    let mixed = run(&["verify", "--count", "5", "--weights", "1,0,0,0", "--no-case-instances", "--json"]);
    let v = json(&stdout(&mixed));
    assert!(v["outcomes"].as_array().unwrap().iter().all(|o| o["units"] == 1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["f2-bounds"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--weights", "1,2"]).status.code(), Some(2));
    let out = run(&["analyze", "pair:0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least one point"));
    assert_eq!(run(&["analyze", "union(pair:2"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "file:tests/data/broken.json"]).status.code(), Some(1));
    assert_eq!(run(&["tmatrix", "pair:2", "one:nope"]).status.code(), Some(1));
}

#[test]
fn cap_from_environment() {
    let out = bin().args(["analyze", "pair:3"]).env("FULLGROUP_CAP", "5").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 5"));
    let out = bin().args(["analyze", "pair:3"]).env("FULLGROUP_CAP", "6").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
