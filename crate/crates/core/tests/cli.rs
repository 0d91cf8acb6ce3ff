use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn crlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crlab")).args(args).output().expect("run crlab")
}

fn graph_file(lines: &[&str]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for l in lines {
        writeln!(f, "{l}").unwrap();
    }
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

// Petersen, C5, K2
const GRAPHS: [&str; 3] = ["IheA@GUAo", "Dhc", "A_"];

#[test]
fn oddgirth_and_mad_per_line() {
    let f = graph_file(&GRAPHS);
    let path = f.path().to_str().unwrap();
    let og = crlab(&["oddgirth", "--in", path]);
    assert!(og.status.success());
    assert_eq!(stdout(&og), "5\n5\ninf\n");
    let m = crlab(&["mad", "--in", path]);
    assert_eq!(stdout(&m), "3/1\n2/1\n1/1\n");
}

#[test]
fn hom_prints_outcome_json() {
    let f = graph_file(&GRAPHS[1..2]);
    let o = crlab(&["hom", "--in", f.path().to_str().unwrap(), "--target", "kneser:5,2", "--budget", "1e7"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "found");
    assert_eq!(v["map"].as_array().unwrap().len(), 5);
    let o = crlab(&["hom", "--in", f.path().to_str().unwrap(), "--target", "kneser:7,3"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "refuted");
}

#[test]
fn audit_embedding_exits_zero_with_certificate() {
    let o = crlab(&["audit-embedding", "--j", "2", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["kind"], "embeddingFailedExhaustive");
}

#[test]
fn audit_collapse_reports_violation_and_exits_zero() {
    let o = crlab(&["audit-collapse", "--cycle", "9", "--length", "3", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["audit"]["claimViolated"], true);
    assert_eq!(v["audit"]["oddGirthAfter"], 7);
}

#[test]
fn pipeline_exit_codes() {
    let f = graph_file(&["Dhc"]);
    let o = crlab(&["pipeline", "--in", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["finalHom"]["map"].is_array());
    // C9 at level 3 with L = 4 collapses into a shorter odd cycle
    let c9 = graph_file(&["HhCGGE@"]);
    let o = crlab(&["pipeline", "--in", c9.path().to_str().unwrap(), "--k", "3", "--l", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["homSource"], "fallback");
}

#[test]
fn experiment_is_reproducible() {
    let args = ["experiment", "--count", "4", "--n", "9", "--seed", "3", "--no-timing"];
    let a = crlab(&args);
    let b = crlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("graph6,mad,oddGirth,class,steps,homFound,claimViolations,nodes,millis"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn discharge_and_kneser() {
    let star = graph_file(&["Ds_"]);
    let o = crlab(&["discharge", "--in", star.path().to_str().unwrap()]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["balanced"], true);
    assert_eq!(v["charges"][0], "2/1");
    let o = crlab(&["discharge", "--in", star.path().to_str().unwrap(), "--csv"]);
    assert!(stdout(&o).starts_with("round,rule,from,to,amount\n1,R1,"));
    let o = crlab(&["kneser", "--n", "7", "--k", "3"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["vertices"].as_u64(), v["edges"].as_u64()), (Some(35), Some(70)));
}

#[test]
fn input_errors_exit_two() {
    let bad = graph_file(&["not a graph"]);
    assert_eq!(crlab(&["mad", "--in", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(crlab(&["mad", "--in", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(crlab(&["hom", "--in", "-", "--target", "bogus"]).status.code(), Some(2));
    assert_eq!(crlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(crlab(&["audit-embedding", "--j", "1", "--k", "3"]).status.code(), Some(2));
}
