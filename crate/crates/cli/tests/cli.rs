use std::fs;
use std::path::Path;
use std::process::Command;

use humbert_cli::commands::run_args;
use humbert_cli::sweep::{sweep, SweepRecord};
use humbert_cli::tables;
use humbert_core::TernaryForm;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["humbert"];
    full.extend_from_slice(args);
    let o = run_args(full);
    (o.code, o.stdout, o.stderr)
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = run(&a);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn classify_json() {
    let v = json(&["classify", "[4,4,4,4,4,4]"]);
    assert_eq!(v["group"], "GL2_3");
    assert_eq!(v["a"], 24);
    assert_eq!(v["k"], 1);
    let v = json(&["classify", "[9,16,16,-16,0,0]"]);
    assert_eq!((v["group"].as_str(), v["a"].as_i64(), v["k"].as_i64()), (Some("C2"), Some(1), Some(12)));
    assert_eq!(v["proper_aut_order"], 12);
}

#[test]
fn reduce_and_intersect() {
    let v = json(&["reduce", "[4,4,5,0,4,0]"]);
    let f: TernaryForm = serde_json::from_value(v["reduced_form"].clone()).unwrap();
    assert_eq!(f, TernaryForm::new(4, 4, 5, 0, -4, 0));
    let (code, out, _) = run(&["intersect", "404", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("q_{4,4,5} = [4,4,5,0,0,0]") && out.contains("q_{6,5} = [4,4,5,0,-4,0]"));
    let v = json(&["pair-intersect", "4", "5"]);
    let forms: Vec<Value> = v["members"].as_array().unwrap().iter().map(|m| m["form"].clone()).collect();
    assert_eq!(serde_json::to_string(&forms).unwrap(), "[[1,0,4],[4,0,5],[4,4,5]]");
}

#[test]
fn number_commands() {
    assert_eq!(json(&["class-number", "-23"])["h"], 3);
    assert_eq!(json(&["d6-count", "3"])["count"]["total"], 6);
    let v = json(&["subcovers", "[4,4,5,0,0,-4]", "3"]);
    assert_eq!((v["exists"].as_bool(), v["count"].as_u64()), (Some(true), Some(12)));
    assert_eq!(json(&["degree-disc", "[4,4,5,4,4,4]"])["degree_form_disc"], -11);
    let v = json(&["humbert-status", "[4,4,4,0,0,0]"]);
    assert_eq!(v["verdict"], "No");
    let v = json(&["aut", "[4,4,4,4,4,4]"]);
    assert_eq!((v["proper_order"].as_u64(), v["predicted_proper_order"].as_u64()), (Some(24), Some(24)));
    assert_eq!(json(&["equiv", "[4,4,5,0,4,0]", "[4,4,5,0,-4,0]"])["equivalent"], true);
    assert_eq!(json(&["rep", "[4,4,5,0,0,-4]", "9", "--primitive"])["primitive_vectors"].as_array().unwrap().len(), 12);
    assert_eq!(run(&["certificate"]).0, 0);
    let v = json(&["genus", "[4,4,9,0,0,-4]"]);
    assert_eq!(v["genus"]["abs_i1"], 48);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reduce", "[1,2"]).0, 2);
    assert_eq!(run(&["reduce", "[1,x,2]"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["intersect", "555", "5"]).0, 2);
    assert_eq!(run(&["reduce", "[1,1,-1,0,0,0]"]).0, 3);
    assert_eq!(run(&["classify", "[4,4,4,0,0,0]"]).0, 3);
    assert_eq!(run(&["pair-intersect", "3", "3"]).0, 3);
    assert_eq!(run(&["d6-count", "4"]).0, 3);
    assert_eq!(run(&["class-number", "-5"]).0, 3);
    assert_eq!(run(&["subcovers", "[1,4,4,0,0,0]", "2"]).0, 3);
    let (code, _, err) = run(&["intersect", "444", "4"]);
    assert_eq!(code, 3);
    assert!(err.contains("primitively represents 4"));
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_humbert");
    let ok = Command::new(bin).args(["class-number", "-15"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "h(-15) = 2\n");
    let bad = Command::new(bin).args(["reduce", "[1,2,3,4]"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let pre = Command::new(bin).args(["classify", "[1,1,1,0,0,0]"]).output().unwrap();
    assert_eq!(pre.status.code(), Some(3));
}

#[test]
fn tables_match_golden_copies() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&["tables", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in [tables::CURVE_GROUPS, tables::GENUS_INVARIANTS, tables::IMPRIMITIVE_ORDERS, tables::PRIMITIVE_ORDERS] {
        let got = fs::read(dir.path().join(name)).unwrap();
        assert_eq!(got, fs::read(golden.join(name)).unwrap(), "{name}");
    }
    let text = fs::read_to_string(dir.path().join(tables::IMPRIMITIVE_ORDERS)).unwrap();
    assert!(text.contains("q_{1,c} | 6 | 6 | 1"));
    let text = fs::read_to_string(dir.path().join(tables::GENUS_INVARIANTS)).unwrap();
    assert!(text.lines().any(|l| l.starts_with("6 | q_{6,c}") && l.contains("| 64(1-c) |")));
}

#[test]
fn sweep_cache_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let rep = sweep(600, Some(&full), Some(2), None).unwrap();
    assert!(full.exists());
    assert_eq!(rep.newly_classified, rep.forms);
    assert_eq!(rep.violations.total(), 0);
    let bytes = fs::read(&full).unwrap();

    // interrupt: keep some whole lines and a torn one
    let text = String::from_utf8(bytes.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let keep = lines.len() / 3;
    let mut partial = lines[..keep].join("\n");
    partial.push('\n');
    partial.push_str(&lines[keep][..lines[keep].len() / 2]);
    let resumed = dir.path().join("resumed.jsonl");
    fs::write(&resumed, partial).unwrap();
    let rep2 = sweep(600, Some(&resumed), Some(3), None).unwrap();
    assert_eq!(rep2.newly_classified, lines.len() - keep);
    assert_eq!(fs::read(&resumed).unwrap(), bytes);
    assert_eq!(rep2.by_status, rep.by_status);

    // a rerun classifies nothing new
    assert_eq!(sweep(600, Some(&full), None, None).unwrap().newly_classified, 0);
    for line in text.lines() {
        let r: SweepRecord = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), line);
    }
}

#[test]
fn sweep_independent_of_jobs() {
    let a = sweep(400, None, Some(1), None).unwrap();
    let b = sweep(400, None, Some(4), None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_exceptional_groups() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let (code, _, err) = run(&["sweep", "100", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(cache.exists());
    let rep = sweep(2000, None, None, None).unwrap();
    assert_eq!(rep.exceptional_forms, vec![TernaryForm::new(4, 4, 4, 0, 0, -4), TernaryForm::new(4, 4, 4, 4, 4, 4)]);
    assert_eq!(rep.violations.total(), 0);
}
