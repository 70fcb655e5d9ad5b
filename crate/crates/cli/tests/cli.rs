use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapley-homology")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn g3_profile() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g3.txt", "1111\n0000\n0001\n");
    let report = json(&["influence", "--input", &input, "--metric", "edit", "--radius", "1", "--exact"]);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["config"]["method"]["seed"], 0);
    let profile = &report["payload"]["profile"];
    assert_eq!(floats(&profile["mu"]), [0.5, 0.25, 0.25]);
    let h = profile["entropy"].as_f64().unwrap();
    assert!((h - 1.5 * std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn path_family_row() {
    let report = json(&["family", "--kind", "path", "--n", "7"]);
    let roles = report["payload"]["closed_form"].as_array().unwrap();
    let find = |name: &str| roles.iter().find(|r| r["role"] == name).unwrap();
    // ends 3/(2(2n-1)), middle 2/(2n-1)
    assert_eq!(find("ends")["influence_exact"], "3/26");
    assert_eq!(find("middle")["influence_exact"], "2/13");
    let mu = floats(&report["payload"]["profile"]["mu"]);
    assert!((mu[0] - 3.0 / 26.0).abs() < 1e-12 && (mu[3] - 2.0 / 13.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.txt", "");
    assert_eq!(run(&["influence", "--input", &empty]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.csv", "0,1\n1,x\n");
    assert_eq!(run(&["influence", "--input", &bad, "--metric", "euclidean"]).status.code(), Some(2));
    assert_eq!(run(&["influence", "--input", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["family", "--kind", "er", "--n", "24", "--p", "0.2"]).status.code(), Some(3));
    assert_eq!(run(&["influence", "--input", &empty, "--no-such-flag"]).status.code(), Some(2));
    let comments = write(dir.path(), "comments.txt", "# no edges\n");
    assert_eq!(run(&["influence", "--input", &comments, "--input-kind", "edges"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "pts.csv", "0,0\n1,0\n2,0\n0,3\n5,5\n5,6\n");
    for format in ["json", "csv", "table"] {
        let args =
            ["sweep", "--input", &input, "--metric", "euclidean", "--radii", "1,2,4", "--sample", "500", "--seed", "9", "--format", format];
        let a = run(&args);
        let b = run(&[&args[..], &["--threads", "1"]].concat());
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn csv_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.txt", "0 1\n1 2\n2 3\n3 1\n4\n");
    let base = ["influence", "--input", &input, "--input-kind", "edges"];
    let report = json(&base);
    let out = run(&[&base[..], &["--format", "csv"]].concat());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["index", "label", "s", "mu"]);
    let profile = &report["payload"]["profile"];
    let (s, mu) = (floats(&profile["shapley"]), floats(&profile["mu"]));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), i);
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), s[i].to_bits());
        assert_eq!(row[3].parse::<f64>().unwrap().to_bits(), mu[i].to_bits());
    }
}

#[test]
fn grammar_listing() {
    let out = run(&["grammar", "--g", "1", "--range", "2:3", "--neg", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4 + 8);
    assert!(text.lines().any(|l| l == "111\t1"));
    assert!(text.lines().any(|l| l == "110\t0"));
    let report = json(&["grammar", "--g", "4", "--len", "4", "--radius", "2"]);
    assert_eq!(report["payload"]["strings"].as_array().unwrap().len(), 10);
    let h = report["payload"]["profile"]["entropy"].as_f64().unwrap();
    assert!((h - 2.302).abs() < 5e-4);
}

#[test]
fn identities_and_masking() {
    let report = json(&["identities", "--n-max", "12", "--m-max", "12"]);
    assert!(report["payload"]["report"]["mismatches"].as_array().unwrap().is_empty());

    let out = run(&["mask", "--count", "12", "--j", "1,2", "--seed", "3", "--format", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.records().count(), 12 * 2 * 3);
    let report = json(&["mask", "--count", "12", "--j", "1,2", "--seed", "3"]);
    assert_eq!(report["config"]["seed"], 3);
    assert_eq!(report["payload"]["report"]["rates"].as_array().unwrap().len(), 2);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["family", "--kind", "star", "--n", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["payload"]["family"], "S_4");
}
