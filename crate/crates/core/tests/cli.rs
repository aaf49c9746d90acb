use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use efpm::instance::SolutionRecord;

fn efpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efpm")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_header_plus_rows_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = efpm(&["gen", "--n", "100", "--seed", "1", "--out", path_str(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 101);
    assert_eq!(text.lines().next(), Some("100"));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn gen_rejects_zero_size() {
    let o = efpm(&["gen", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_two_by_two_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    fs::write(&inst, "2\n5 4\n1 2\n").unwrap();

    let mut solutions = Vec::new();
    for method in ["efpm", "bellman-ford"] {
        let out = dir.path().join(format!("{method}.json"));
        let o = efpm(&["solve", path_str(&inst), "--method", method, "--out", path_str(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let record = SolutionRecord::parse(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(record.solution.prices, vec![3, 2]);
        assert_eq!(record.solution.revenue, 5);
        assert_eq!(record.run.method, method);
        assert!(record.run.timings.is_some());
        solutions.push(serde_json::to_string(&record.solution).unwrap());
    }
    assert_eq!(solutions[0], solutions[1]);
}

#[test]
fn solve_single_item_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("one.txt");
    fs::write(&inst, "1\n37\n").unwrap();
    let o = efpm(&["solve", path_str(&inst), "--format", "text"]);
    assert!(o.status.success());
    let record = SolutionRecord::parse(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(record.solution.prices, vec![37]);
}

#[test]
fn solve_rejects_malformed_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.txt");
    fs::write(&inst, "3\n1 2 3\n4 5 6\n").unwrap();
    let o = efpm(&["solve", path_str(&inst)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    let o = efpm(&["solve", path_str(&dir.path().join("missing.txt"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_accepts_pipeline_output_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sol = dir.path().join("sol.json");
    assert!(efpm(&["gen", "--n", "30", "--seed", "5", "--out", path_str(&inst)]).status.success());
    assert!(efpm(&["solve", path_str(&inst), "--out", path_str(&sol)]).status.success());

    let o = efpm(&["verify", path_str(&inst), path_str(&sol)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("envy_free: true"));

    // Raise the price of an item whose winner has zero utility: that
    // consumer's utility goes negative.
    let mut record = SolutionRecord::parse(&fs::read_to_string(&sol).unwrap()).unwrap();
    let item = record.solution.utilities.iter().position(|&y| y == 0).unwrap();
    record.solution.prices[item] += 1;
    record.solution.revenue += 1;
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, record.to_json()).unwrap();
    let o = efpm(&["verify", path_str(&inst), path_str(&tampered), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["envy_free"], false);
}

#[test]
fn verify_flags_envy_from_price_increase() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sol = dir.path().join("sol.txt");
    fs::write(&inst, "2\n5 4\n1 2\n").unwrap();
    assert!(efpm(&["solve", path_str(&inst), "--format", "text", "--out", path_str(&sol)]).status.success());
    let text = fs::read_to_string(&sol).unwrap().replace("prices 3 2", "prices 4 2").replace("revenue 5", "revenue 6");
    fs::write(&sol, text).unwrap();
    let o = efpm(&["verify", path_str(&inst), path_str(&sol)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("consumer 0 prefers item 1 by 1"));
}

#[test]
fn verify_rejects_size_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.txt");
    let big = dir.path().join("big.txt");
    let sol = dir.path().join("sol.json");
    fs::write(&small, "2\n5 4\n1 2\n").unwrap();
    fs::write(&big, "3\n1 2 3\n4 5 6\n7 8 9\n").unwrap();
    assert!(efpm(&["solve", path_str(&small), "--out", path_str(&sol)]).status.success());
    let o = efpm(&["verify", path_str(&big), path_str(&sol)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_formats_and_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trials.csv");
    let o = efpm(&["bench", "--sizes", "10,20", "--trials", "3", "--seed", "4", "--out", path_str(&csv)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("reduction"));

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,method,trial,pricing_seconds,matching_seconds,iterations"));
    assert_eq!(lines.count(), 2 * 2 * 3);

    let o = efpm(&["bench", "--sizes", "10", "--trials", "2", "--methods", "efpm", "--format", "json"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["reductions"].as_array().unwrap().len(), 0);
    assert_eq!(report["summaries"].as_array().unwrap().len(), 1);
}

#[test]
fn bench_rejects_single_trial() {
    let o = efpm(&["bench", "--sizes", "10", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = efpm(&["bench", "--sizes", "10", "--methods", "simplex"]);
    assert_eq!(o.status.code(), Some(2));
}
