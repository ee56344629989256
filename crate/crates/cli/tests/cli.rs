use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unknot")).args(args).output().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unknot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TREFOIL: &str = "PD[X(6,3,1,4),X(4,1,5,2),X(2,5,3,6)]";

#[test]
fn decide_exit_codes() {
    let culprit = fixture("culprit.txt");
    let o = run(&["decide", culprit.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("unknot"));

    let t = scratch("trefoil.pd", TREFOIL);
    let o = run(&["decide", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("interpretation( 3,"));

    let o = run(&["decide", t.to_str().unwrap(), "--max-size", "2", "--timeout", "0.05"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = scratch("bad.pd", "PD[X(1,2,3)]");
    let o = run(&["decide", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
    assert_eq!(run(&["decide", "/no/such/file"]).status.code(), Some(3));
}

#[test]
fn decide_json() {
    let t = scratch("trefoil_json.pd", TREFOIL);
    let o = run(&["decide", t.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "knotted");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["model"]["minimal"], true);
}

#[test]
fn refute_and_prove() {
    let t = scratch("trefoil_refute.pd", TREFOIL);
    let o = run(&["refute", t.to_str().unwrap(), "--max-size", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("size 3"));
    let culprit = fixture("culprit.txt");
    let o = run(&["refute", culprit.to_str().unwrap(), "--max-size", "4", "--axioms", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("size 4"));
    let o = run(&["prove", culprit.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("axiom(Q3)"));
    let o = run(&["prove", t.to_str().unwrap(), "--timeout", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn batch_with_expected_sizes() {
    let table = scratch("table.txt", &format!("3_1 pd {TREFOIL}\nkink pd PD[X(1,1,2,2)]\n"));
    let exp = scratch("exp.tsv", "knot\tsize\n3_1\t3\n");
    let o = run(&["batch", table.to_str().unwrap(), "--expected", exp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("3_1\tknotted\t3"));
    assert!(out.contains("kink\tunknot"));
    assert!(out.contains("mismatches: 0"));
    let wrong = scratch("wrong.tsv", "3_1\t5\n");
    let o = run(&["batch", table.to_str().unwrap(), "--expected", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let empty = scratch("empty.txt", "");
    let o = Command::new(env!("CARGO_BIN_EXE_unknot"))
        .args(["batch", empty.to_str().unwrap()])
        .env("UNKNOT_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn rm_trace_and_invariants() {
    let o = run(&[
        "rm-trace",
        fixture("traces/triangle.pd").to_str().unwrap(),
        fixture("traces/triangle.moves").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["diagrams"].as_array().unwrap().len(), 4);
    assert_eq!(v["trivial_proved"], true);
    let moves = scratch("bad.moves", "RM1_down @ crossing 1\n");
    let t = scratch("trefoil_rm.pd", TREFOIL);
    let o = run(&["rm-trace", t.to_str().unwrap(), moves.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("RM1_down"));

    let o = run(&["invariants", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("determinant: 3"));
    assert!(out.contains("[3]"));
}
