use std::io::Write;
use std::process::{Command, Output};

use padic_perron::report::{from_json, to_json, ReportJson};
use serde_json::Value;

const EXAMPLE_2X2: &str = r#"{"n":2,"entries":[["4","-5"],["1","10"]]}"#;
const TIED_2X2: &str = r#"{"n":2,"entries":[["5/3","1"],["1","7/3"]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-perron"))
        .args(args)
        .env_remove("PADIC_PERRON_PRECISION")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_reports_lambda_max() {
    let out = run(&["analyze", "--p", "3", "--precision", "20", "--matrix", EXAMPLE_2X2, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["status"]["kind"], "certified");
    assert_eq!(v["lambda_max"]["unit"], "5");
    assert_eq!(v["lambda_max"]["val"], 0);
    assert_eq!(v["lambda_max"]["disc_certified"], "yes");
    assert_eq!(v["charpoly"], serde_json::json!(["45", "-14", "1"]));
    assert_eq!(v["projection"]["certified_precision"], 20);
}

#[test]
fn json_reports_round_trip_byte_for_byte() {
    for (p, m) in [("3", EXAMPLE_2X2), ("2", TIED_2X2)] {
        let out = run(&["analyze", "--p", p, "--precision", "24", "--matrix", m, "--format", "json"]);
        let text = String::from_utf8(out.stdout).unwrap();
        let back: ReportJson = from_json(&text).unwrap();
        assert_eq!(to_json(&back), text);
    }
}

fn leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
        Value::Array(a) => a.iter().for_each(|x| leaves(x, out)),
        Value::String(s) => out.push(s.clone()),
        Value::Number(n) => out.push(n.to_string()),
        Value::Bool(b) => out.push(b.to_string()),
        Value::Null => {}
    }
}

#[test]
fn text_mode_carries_every_json_fact() {
    let base = ["analyze", "--p", "3", "--precision", "20", "--matrix", EXAMPLE_2X2];
    let j = json(&run(&[&base[..], &["--format", "json"]].concat()));
    let t = String::from_utf8(run(&base).stdout).unwrap();
    let mut facts = Vec::new();
    leaves(&j, &mut facts);
    for f in facts {
        assert!(t.contains(&f), "text output lacks {f:?}");
    }
    assert!(t.contains("lambda_max:"));
}

#[test]
fn polygon_from_coefficients() {
    let out = run(&["polygon", "--p", "2", "--poly", r#"["26/9","-4","1"]"#, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["polygon"]["segments"], serde_json::json!([{"slope": "-1/2", "length": 2}]));
    assert_eq!(v["root_valuations"], serde_json::json!([{"valuation": "1/2", "count": 2}]));
}

#[test]
fn unsatisfied_hypothesis_is_a_finding() {
    let out = run(&["analyze", "--p", "2", "--matrix", TIED_2X2, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hypothesis"]["satisfied"], false);
    assert_eq!(v["status"]["kind"], "no-strict-max");
    assert!(v["status"]["detail"].as_str().unwrap().contains("no strictly maximal eigenvalue"));
}

#[test]
fn counterexample_verification() {
    let out = run(&["counterexample", "--p", "2", "--n", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["matrix"]["entries"], serde_json::json!([["5", "1"], ["1", "1"]]));

    let out = run(&["counterexample", "--p", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("must divide"));
}

#[test]
fn input_errors_exit_with_2() {
    let cases: [&[&str]; 6] = [
        &["analyze", "--p", "3", "--matrix", r#"{"n":2,"entries":[["1"]]}"#],
        &["analyze", "--p", "4", "--matrix", EXAMPLE_2X2],
        &["analyze", "--p", "3", "--matrix", "{not json"],
        &["analyze", "--p", "3", "--matrix", r#"{"n":1,"entries":[["1/0"]]}"#],
        &["analyze", "--p", "3", "--precision", "4", "--matrix", EXAMPLE_2X2],
        &["analyze", "--matrix", EXAMPLE_2X2],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn exhausted_squaring_cap_exits_with_3() {
    let out = run(&["project", "--p", "3", "--precision", "20", "--max-squarings", "1", "--matrix", EXAMPLE_2X2, "--format", "json"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert_eq!(json(&out)["status"]["kind"], "certification-failed");
}

#[test]
fn reads_matrix_files_and_precision_from_env() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(br#"{"n":1,"entries":[["7/3"]]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_padic-perron"))
        .args(["charpoly", "--p", "5", "--format", "json", "--input"])
        .arg(f.path())
        .env("PADIC_PERRON_PRECISION", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["polynomial"], "x - 7/3");
    assert_eq!(v["context"]["precision"], 12);
}

#[test]
fn eigen_and_project_over_laurent_series() {
    let m = r#"{"n":2,"entries":[["1 + t","1"],["1 + 2*t^2","1 + t^3"]]}"#;
    let e = json(&run(&["eigen", "--field", "laurent", "--p", "3", "--precision", "16", "--matrix", m, "--format", "json"]));
    assert_eq!(e["status"]["kind"], "certified");
    assert_eq!(e["lambda_max"]["unit"].as_str().unwrap().chars().next(), Some('2'));
    assert_eq!(e["eigenvector"]["x"].as_array().unwrap().len(), 2);
    let p = json(&run(&["project", "--field", "laurent", "--p", "3", "--precision", "16", "--matrix", m, "--format", "json"]));
    assert!(p["projection"]["certified_precision"].as_i64().unwrap() >= 16);
}

#[test]
fn campaigns_are_deterministic() {
    let args = ["campaign", "--p", "3,5", "--n", "3", "--trials", "6", "--seed", "9", "--precision", "16", "--format", "json"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let v = json(&first);
    assert_eq!(v["passes"], 6);
    assert_eq!(v["config"]["primes"], serde_json::json!([3, 5]));
    assert_eq!(first.stdout, run(&args).stdout);
}
