use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn dtangent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtangent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn schema() -> JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let value: Value = serde_json::from_str(text).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = dtangent(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = schema();
    if let Err(errors) = s.validate(&v) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{args:?} violates the schema: {msgs:?}");
    }
    v
}

#[test]
fn every_verb_emits_schema_valid_json() {
    let v = json(&["tangent-internal", "wedge(3)"]);
    assert_eq!(v["internal"]["dim"], 3);

    let v = json(&["tangent-internal", "wire(2)", "--slopes", "1,2,1/2"]);
    assert_eq!(v["internal"]["dim"], 5);

    let v = json(&["tangent-external", "orbit_quotient(4)", "--order", "5"]);
    assert_eq!(v["external"]["dim"], 1);
    assert_eq!(v["external"]["orders"], serde_json::json!([5, 6]));

    let v = json(&["beta", "euclidean(2)", "(1, 2)"]);
    assert_eq!(v["beta"]["rank"], 2);
    assert_eq!(v["beta"]["matrix"], serde_json::json!([["1", "0"], ["0", "1"]]));

    let v = json(&["bundle-check", "wedge(2)", "(0, 0); (t, t)"]);
    assert_eq!(v["details"]["hector"]["verdict"], "nonmember");
    assert_eq!(v["details"]["dvs"]["verdict"], "member");

    let v = json(&["fibrewise", "wedge(2)", "(0, 0); (t, 0)", "(0, 0); (0, t)"]);
    let ops = v["details"]["operations"].as_array().unwrap();
    assert_eq!(ops.len(), 2);
    for op in ops {
        assert_eq!(op["hector"], "counterexample");
        assert_eq!(op["dvs"], "smooth-on-candidates");
    }

    let v = json(&["trivialize", "product[euclidean(1), irrational_torus(sqrt(2))]"]);
    assert_eq!(v["details"]["hector_equals_dvs"], true);

    let v = json(&["fine", "irrational_torus(sqrt(3))", "1"]);
    assert_eq!(v["details"]["verdict"], "fine");

    let v = json(&["table"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
}

#[test]
fn text_output_and_out_file() {
    let o = dtangent(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("11/11 in-scope rows reproduced"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = dtangent(&[
        "beta",
        "half_line",
        "0",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["beta"]["surjective"], false);
    assert_eq!(v["provenance"]["paper_row"], "[0, inf) with the sub-diffeology of R");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["tangent-internal", "wedge(2"],
        vec!["tangent-internal", "cone(2)"],
        vec!["tangent-internal", "wedge(1)"],
        vec!["tangent-internal", "wedge(2)", "(1, 1)"],
        vec!["tangent-external", "half_line", "--slopes", "1"],
        vec!["tangent-internal", "euclidean(2)", "--slopes", "1"],
        vec!["tangent-internal", "wire(2)", "--slopes", "1,1"],
        vec!["tangent-external", "half_line", "--order", "1"],
        vec!["bundle-check", "wedge(2)", "(0, 0, 0); (t, 0)"],
        vec!["bundle-check", "wedge(2)", "(0, 0); (t, 0, 0)"],
        vec!["no-such-verb"],
    ] {
        let o = dtangent(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
    let o = dtangent(&["tangent-internal", "wedge(2"]);
    assert!(stderr(&o).contains("1:8: expected ')'"), "{}", stderr(&o));
}

#[test]
fn computation_failures_exit_with_one() {
    let o = dtangent(&["trivialize", "wedge(2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unsupported group"));
    let o = dtangent(&["bundle-check", "half_line", "(t^2); (t)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn runs_are_deterministic() {
    let args = ["fibrewise", "euclidean(2)", "(t, 1); (1, t)", "(t, 1); (t^2, 0)", "--format", "json"];
    assert_eq!(stdout(&dtangent(&args)), stdout(&dtangent(&args)));
}
