use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn binform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binform")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = binform(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn invariants_of_table_quartic() {
    let v = json_of(&["invariants", "-d", "4", "-c", "0,0,1,0,0"]);
    assert_eq!(v, json!({"weights": [2, 3], "coords": ["1", "-2"]}));
}

#[test]
fn quadratic_discriminant() {
    let v = json_of(&["invariants", "-d", "2", "-c", "1,1,1"]);
    assert_eq!(v["coords"], json!(["-3"]));
}

#[test]
fn normalize_both() {
    let v = json_of(&["invariants", "-d", "4", "-c", "5,0,0,1,0", "--normalize", "both"]);
    assert_eq!(v["raw"]["coords"], json!(["0", "-135"]));
    assert_eq!(v["normalized"]["coords"], json!(["0", "-5"]));
}

#[test]
fn zero_form_is_invalid_input() {
    let out = binform(&["invariants", "-d", "4", "-c", "0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero form"));
}

#[test]
fn wrong_coefficient_count_and_bad_degree() {
    assert_eq!(binform(&["invariants", "-d", "4", "-c", "1,2"]).status.code(), Some(2));
    assert_eq!(binform(&["invariants", "-d", "11", "-c", "1,0,0,0,0,0,0,0,0,0,0,1"]).status.code(), Some(2));
    assert_eq!(binform(&["invariants", "-d", "4", "-c", "1,x,0,0,1"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(binform(&["nonsense"]).status.code(), Some(1));
    assert_eq!(binform(&["invariants", "--bogus"]).status.code(), Some(1));
    assert_eq!(binform(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_reports() {
    let v = json_of(&["classify", "-d", "4", "-c", "5,0,0,1,0"]);
    assert_eq!(v["class"], "stable");
    assert_eq!(v["unstablePrimes"], json!(["3", "5"]));

    let v = json_of(&["classify", "-d", "4", "-c", "0,0,1,0,0"]);
    assert_eq!(v["class"], "strictlySemistable");
    assert_eq!(v["unstablePrimes"], json!([]));

    // x^3(x - y) = x^4 - x^3 y
    let v = json_of(&["classify", "-d", "4", "-c", "0,0,0,-1,1"]);
    assert_eq!(v["class"], "unstable");
    assert_eq!(v["moduliPoint"]["coords"], json!(["0", "0"]));
}

#[test]
fn reduce_point_locally_and_globally() {
    let base = ["reduce", "--point", "0,-135", "--weights", "2,3", "--degree", "4"];
    let mut local = base.to_vec();
    local.extend(["--prime", "5"]);
    let v = json_of(&local);
    assert_eq!(v["rational"]["coords"], json!(["0", "-27"]));
    assert_eq!(v["twists"][0], json!({"p": "5", "r": "1/6", "ramification": 6}));

    let mut global = base.to_vec();
    global.push("--global");
    let v = json_of(&global);
    assert_eq!(v["rational"]["coords"], json!(["0", "-1"]));
    let primes: Vec<&str> = v["twists"].as_array().unwrap().iter().map(|t| t["p"].as_str().unwrap()).collect();
    assert_eq!(primes, ["3", "5"]);

    let mut seven = base.to_vec();
    seven.extend(["--prime", "7"]);
    let out = binform(&seven);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("already semistable at 7"));
}

#[test]
fn reduce_unstable_form_is_domain_failure() {
    let out = binform(&["reduce", "-d", "4", "-c", "0,0,0,0,1", "--global"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn heights() {
    let v = json_of(&["height", "--point", "1,-2", "--weights", "2,3"]);
    assert_eq!(v["factors"], json!([["2", "1/3"]]));
    assert!((v["log"].as_f64().unwrap() - 0.2310).abs() < 1e-3);

    let v = json_of(&[
        "height",
        "--point",
        "-5,625,-312500,-2500,390625,0,-390625000,-312500,-244140625000",
        "--weights",
        "2,4,6,6,8,9,10,14,14",
        "--mode",
        "archimedean",
    ]);
    assert_eq!(v["factors"], json!([["2", "1/3"], ["5", "7/6"]]));

    let v = json_of(&["height", "--point", "1,0", "--weights", "2,3"]);
    assert_eq!(v["factors"], json!([]));
    assert_eq!(v["log"].as_f64(), Some(0.0));
}

#[test]
fn expand_and_explain() {
    let v = json_of(&["expand", "-d", "4", "-i", "0"]);
    assert_eq!(v[0]["poly"], "12*a0*a4 - 3*a1*a3 + a2^2");
    let out = binform(&["expand", "-d", "9"]);
    assert_eq!(out.status.code(), Some(2));

    let v = json_of(&["explain", "-d", "10"]);
    assert_eq!(v["invariants"].as_array().unwrap().len(), 9);
    let text = binform(&["explain", "-d", "6"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("c1 = (f, f)_4"));
}

#[test]
fn verify_tables_passes_with_three_warnings() {
    let v = json_of(&["verify-paper"]);
    let items = v["items"].as_array().unwrap();
    let count = |s: &str| items.iter().filter(|i| i["status"] == s).count();
    assert_eq!(count("FAIL"), 0);
    assert_eq!(count("WARN"), 3);
    assert!(count("PASS") >= 15);
}

#[test]
fn batch_keeps_input_order() {
    let mut lines = String::new();
    for k in 1..=40 {
        // k x^2 y^2 + x^4
        lines.push_str(&format!("{{\"degree\":4,\"coeffs\":[0,0,{k},0,1]}}\n"));
    }
    lines.push_str("{\"degree\":4,\"coeffs\":[0,0,0,0,0]}\n");
    let mut child = Command::new(env!("CARGO_BIN_EXE_binform"))
        .args(["--json", "invariants", "--batch", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(lines.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let rows: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 41);
    for (k, row) in rows[..40].iter().enumerate() {
        // xi_0 = 12 a0 a4 - 3 a1 a3 + a2^2 = (k+1)^2
        assert_eq!(row["coords"][0], json!(((k + 1) * (k + 1)).to_string()));
    }
    assert_eq!(rows[40]["line"], 41);
    assert!(rows[40]["error"].as_str().unwrap().contains("zero form"));
}

#[test]
fn json_round_trips_into_core_types() {
    use binform_core::stability::StabilityReport;
    use binform_core::weighted::{FactoredValue, ModuliPoint};

    let v = json_of(&["invariants", "-d", "6", "-c", "0,0,0,1,0,0,0"]);
    let p: ModuliPoint = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&p).unwrap(), v);

    let v = json_of(&["classify", "-d", "4", "-c", "5,0,0,1,0"]);
    let r: StabilityReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), v);

    let v = json_of(&["height", "--point", "2,12,64,64,512,512", "--weights", "2,3,4,5,6,7", "--mode", "literal"]);
    let h: FactoredValue = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(h.to_rational(), Some(binform_core::arith::rat(2)));
    assert_eq!(serde_json::to_value(&h).unwrap(), v);
}
