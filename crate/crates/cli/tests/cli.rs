use std::process::{Command, Output};

use polyknot::verify::{Analysis, Outcome, VerificationReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyknot")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn degree_bound() {
    let o = run(&["degree-bound", "3", "7", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(5, 8, ≤41), r0=1\n");
    let o = run(&["--json", "degree-bound", "3", "7", "7"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bound"]["m"], 8);
    assert_eq!(run(&["degree-bound", "3", "6", "0"]).status.code(), Some(1));
}

#[test]
fn analyze_injective_projection() {
    let o = run(&["analyze", "t", "t^2", "t^3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("crossings: 0"), "{out}");
    assert!(out.contains("unknot candidate"), "{out}");
    let o = run(&["--json", "analyze", "t", "t^2", "t^3"]);
    let a: Analysis = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(a.outcome, Outcome::Unidentified);
    assert!(a.unknot_candidate);
}

#[test]
fn invariants_of_trefoil() {
    let o = run(&["invariants", "t^3 - 3t", "t^4 - 4t^2", "t^5 - 10t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("determinant: 3"), "{out}");
}

#[test]
fn usage_errors_print_grammar() {
    let o = run(&["analyze", "t^3 - 3t", "t^4 - 4 t^2 +", "t"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("position 13"), "{err}");
    assert!(err.contains("Input grammar"));
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Input grammar"));
    assert_eq!(run(&["construct", "s1 x2"]).status.code(), Some(2));
}

#[test]
fn verify_catalog_reports() {
    let o = run(&["verify-catalog", "8_17"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 of 2 verified"));
    let o = run(&["--json", "verify-catalog"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(reports.len(), 36);
    assert_eq!(run(&["verify-catalog", "9_1"]).status.code(), Some(1));
}

#[test]
fn custom_catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    std::fs::write(
        &path,
        r#"{"name": "3_1", "f": "t^3 - 3t", "g": "t^4 - 4t^2", "h": "t^5 - 10t", "source": "section5"}"#,
    )
    .unwrap();
    let o = run(&["--catalog", path.to_str().unwrap(), "verify-catalog"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("1 of 1 verified"));
}

#[test]
fn construct_then_export() {
    let dir = tempfile::tempdir().unwrap();
    let knot = dir.path().join("knot.json");
    let o = run(&["--json", "construct", "s1 s1 s1"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&knot, &o.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["crossings"], 3);
    assert_eq!(v["identified_as"][0]["name"], "3_1");

    let csv = dir.path().join("knot.csv");
    let k = knot.to_str().unwrap();
    let o = run(&["export", k, "--points", "1000", "--format", "csv", "-o", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1001);
    assert_eq!(text.lines().next(), Some("t,x,y,z"));

    let o = run(&["export", k, "--points", "4", "--format", "obj", "--range", "-1,1"]);
    assert!(stdout(&o).ends_with("l 1 2 3 4\n"));
    assert_eq!(run(&["export", k, "--points", "1"]).status.code(), Some(1));
    assert_eq!(run(&["export", k, "--format", "ply"]).status.code(), Some(2));
}

#[test]
fn construct_rejects_links() {
    let o = run(&["construct", "s1 s1"]);
    assert_eq!(o.status.code(), Some(1));
}
