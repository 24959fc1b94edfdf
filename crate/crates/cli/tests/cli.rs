use std::process::{Command, Output};

use serde_json::Value;

fn aswkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aswkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn jsonl(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn record<'a>(recs: &'a [Value], suffix: &str) -> &'a Value {
    recs.iter().find(|r| r["check_id"].as_str().unwrap().ends_with(suffix)).unwrap()
}

#[test]
fn count_examples() {
    let o = aswkit(&["count", "--alpha", "4", "--oracle", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = jsonl(&o);
    let v = record(&recs, ".v_n");
    assert_eq!((v["formula"].as_str(), v["oracle"].as_str(), v["status"].as_str()), (Some("3"), Some("3"), Some("pass")));

    let recs = jsonl(&aswkit(&["count", "--alpha", "3", "--n", "2", "--oracle", "--format", "jsonl"]));
    assert_eq!(record(&recs, ".v_n")["oracle"], "1");
    let recs = jsonl(&aswkit(&["count", "--alpha", "2", "--n", "2", "--oracle", "--format", "jsonl"]));
    assert_eq!(record(&recs, ".v_n")["formula"], "0");
    assert_eq!(record(&recs, ".v_n")["oracle"], "0");
}

#[test]
fn jsonl_schema_is_fixed() {
    let recs = jsonl(&aswkit(&["verify-all", "--only", "6", "--format", "jsonl"]));
    assert_eq!(recs.len(), 3);
    for r in &recs {
        let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(keys, vec!["check_id", "formula", "millis", "oracle", "params", "status"]);
        assert!(r["millis"].is_null());
    }
    let timed = jsonl(&aswkit(&["verify-all", "--only", "6", "--format", "jsonl", "--timing"]));
    assert!(timed.iter().all(|r| r["millis"].is_u64()));
}

#[test]
fn output_is_deterministic_given_seed() {
    let args = ["verify-all", "--only", "7,10", "--format", "jsonl", "--seed", "11"];
    let a = aswkit(&args);
    let b = aswkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let ids: Vec<String> = jsonl(&a).iter().map(|r| r["check_id"].as_str().unwrap().to_string()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn small_cap_skips_oracles() {
    let o = aswkit(&["verify-all", "--only", "1,4", "--cap", "10", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = jsonl(&o);
    assert!(recs.iter().any(|r| r["status"] == "skipped" && r["check_id"].as_str().unwrap().starts_with("c01")));
    assert!(recs.iter().filter(|r| r["check_id"].as_str().unwrap().starts_with("c04")).all(|r| r["status"] == "pass"));
}

#[test]
fn exit_codes() {
    assert_eq!(aswkit(&["verify-all", "--n", "5"]).status.code(), Some(2));
    assert_eq!(aswkit(&["count"]).status.code(), Some(2));
    assert_eq!(aswkit(&["count", "--alpha", "30", "--oracle"]).status.code(), Some(3));
    assert_eq!(aswkit(&["count", "--alpha", "3", "--cap", "0"]).status.code(), Some(2));
    assert_eq!(aswkit(&["normalize", "(1/T"]).status.code(), Some(2));
    assert_eq!(aswkit(&["verify-all", "--only", "12"]).status.code(), Some(2));
}

#[test]
fn normalize_examples() {
    let v: Value = serde_json::from_str(&stdout(&aswkit(&["normalize", "(1/T^2)", "--format", "jsonl"]))).unwrap();
    assert_eq!(v["normalized_beta"], "(1/T)");
    assert_eq!(v["certificate"], "(1/T)");
    assert_eq!(v["conductors"][0]["conductor"], "T^2");
    assert_eq!(v["infinity"]["label"], "decomposed");

    let v: Value = serde_json::from_str(&stdout(&aswkit(&["normalize", "(0)", "--format", "jsonl"]))).unwrap();
    assert_eq!(v["verdict"], "unramified at P");
    assert_eq!(v["conductors"], Value::Array(vec![]));

    let v: Value =
        serde_json::from_str(&stdout(&aswkit(&["normalize", "(1/T, 1/T^2)", "--n", "2", "--format", "jsonl"]))).unwrap();
    assert_eq!(v["normalized_beta"], "(1/T, 1/T)");
    assert_eq!(v["conductors"][0]["exponent"], 2);
    assert_eq!(v["conductors"][0]["conductor"], "T^3");
}

#[test]
fn environment_mirrors_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_aswkit"))
        .args(["count", "--format", "jsonl"])
        .env("ASWKIT_P", "3")
        .env("ASWKIT_ALPHA", "6")
        .output()
        .unwrap();
    assert_eq!(record(&jsonl(&o), ".v_n")["formula"], "40");
}

#[test]
fn witt_and_carlitz_commands() {
    let r = |args: &[&str]| -> Value { serde_json::from_str(&stdout(&aswkit(args))).unwrap() };
    assert_eq!(r(&["witt-eval", "add", "(1,0)", "(1,0)", "--n", "2", "--format", "jsonl"])["result"], "(0, 1)");
    assert_eq!(r(&["witt-eval", "neg", "(1,0)", "--n", "2", "--format", "jsonl"])["result"], "(1, 1)");
    assert_eq!(r(&["witt-eval", "int-mul", "(1/T, 0)", "--m", "3", "--n", "2", "--format", "jsonl"])["result"], "(1/T, 1/T^2)");
    assert_eq!(r(&["witt-eval", "ghost", "(1, 1)", "--n", "2", "--over", "integers", "--format", "jsonl"])["result"], "[1, 3]");
    let c = r(&["carlitz", "T^2", "--eval", "1", "--with", "T+1", "--format", "jsonl"]);
    assert_eq!(c["C_M"], "[(0, T^2), (1, T^2+T), (2, 1)]");
    assert_eq!(c["eval"], "T+1");
    assert_eq!(c["gcd_check"], true);
    let i = r(&["infinity", "(1)", "--format", "jsonl"]);
    assert_eq!((i["e"].as_u64(), i["f"].as_u64(), i["g"].as_u64()), (Some(1), Some(2), Some(1)));
}
