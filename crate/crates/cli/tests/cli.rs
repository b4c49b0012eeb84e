use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatslice")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn quat(v: &Value) -> [f64; 4] {
    let a = v.as_array().expect("quaternion array");
    std::array::from_fn(|n| a[n].as_f64().unwrap())
}

fn mul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

fn inv(q: [f64; 4]) -> [f64; 4] {
    let n: f64 = q.iter().map(|c| c * c).sum();
    [q[0] / n, -q[1] / n, -q[2] / n, -q[3] / n]
}

fn dist(p: [f64; 4], q: [f64; 4]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

const EXP_J: &str = r#"{"kind":"exp","b":[0,0,1,0]}"#;

#[test]
fn transform_of_exp_j_matches_closed_form() {
    let out = run(&["transform", "--input", EXP_J, "--probes", "[[2,0,0,0],[1,1,0,0],[1,0,0,2]]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 3);
    for r in recs {
        let s = quat(&r["s"]);
        let s2 = mul(s, s);
        let expect = mul(inv([s2[0] + 1.0, s2[1], s2[2], s2[3]]), [s[0], s[1], s[2] + 1.0, s[3]]);
        assert!(dist(quat(&r["value"]), expect) < 1e-6);
        assert!(r["est_error"].as_f64().unwrap() < 1e-6);
    }
}

#[test]
fn transform_of_one_at_two() {
    let out = run(&["transform", "--input", r#"{"kind":"poly","coeffs":[[1,0,0,0]]}"#, "--probes", "[[2,0,0,0]]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = quat(&json(&out)["records"][0]["value"]);
    assert!(dist(v, [0.5, 0.0, 0.0, 0.0]) < 1e-9);
}

#[test]
fn empty_probe_list_gives_empty_table() {
    let out = run(&["transform", "--input", EXP_J, "--probes", "[]"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["records"].as_array().unwrap().is_empty());
    let out = run(&["transform", "--input", EXP_J, "--probes", "[]", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn probes_outside_the_domain_are_listed_and_fail_the_run() {
    let out = run(&["transform", "--input", r#"{"kind":"exp","b":[1,0,0,0]}"#, "--probes", "[[0.5,0,0,0],[2,0,0,0]]"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["records"][0]["error"].as_str().unwrap().contains("domain"));
    assert!(v["records"][1]["error"].is_null());
}

#[test]
fn malformed_input_is_a_usage_error_naming_the_field() {
    let out = run(&["regprod", "--input", r#"{"f":{"side":"left","coeffs":[[0,1,0]]},"g":{"side":"left","coeffs":[]}}"#]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("f.coeffs[0]") && msg.contains("line 1"), "{msg}");
    let out = run(&["transform", "--input", "{", "--probes", "[]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["transform", "--input", EXP_J, "--probes", "[]", "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["transform", "--input", "/nonexistent/spec.json", "--probes", "[]"]);
    assert_eq!(out.status.code(), Some(2));
}

fn series(side: &str, coeffs: &str) -> String {
    format!(r#"{{"side":"{side}","coeffs":{coeffs}}}"#)
}

fn regprod(f: &str, g: &str) -> (Option<i32>, Value) {
    let input = format!(r#"{{"f":{f},"g":{g}}}"#);
    let out = run(&["regprod", "--input", &input]);
    let code = out.status.code();
    (code, if code == Some(0) { json(&out) } else { Value::Null })
}

fn coeffs(v: &Value) -> Vec<[f64; 4]> {
    v["product"]["coeffs"].as_array().unwrap().iter().map(quat).collect()
}

#[test]
fn regular_products() {
    let (code, v) = regprod(&series("left", "[[0,-1,0,0],[1,0,0,0]]"), &series("left", "[[0,1,0,0],[1,0,0,0]]"));
    assert_eq!(code, Some(0));
    assert_eq!(coeffs(&v), vec![[1.0, 0.0, 0.0, 0.0], [0.0; 4], [1.0, 0.0, 0.0, 0.0]]);

    let f = series("right", "[[1,2,3,4],[0,1,0,-1]]");
    let (_, v) = regprod(&f, &series("right", "[[1,0,0,0]]"));
    assert_eq!(coeffs(&v), vec![[1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 0.0, -1.0]]);

    let (_, v) = regprod(&series("left", "[[0,1,0,0]]"), &series("left", "[[0,0,1,0]]"));
    assert_eq!(coeffs(&v), vec![[0.0, 0.0, 0.0, 1.0]]);

    let (code, _) = regprod(&series("left", "[[0,1,0,0]]"), &series("right", "[[0,0,1,0]]"));
    assert_eq!(code, Some(2));
}

#[test]
fn regprod_evaluates_on_request() {
    let input = format!(r#"{{"f":{},"g":{}}}"#, series("left", "[[0,1,0,0]]"), series("left", "[[0,0,1,0]]"));
    let out = run(&["regprod", "--input", &input, "--probes", "[[3,0,0,0]]"]);
    let v = json(&out);
    assert_eq!(quat(&v["values"][0]["value"]), [0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn eval_applies_operations() {
    let f = series("left", "[[1,0,0,0],[0,0,0,1]]");
    let input = format!(r#"{{"f":{f},"op":"reciprocal"}}"#);
    let out = run(&["eval", "--input", &input, "--probes", "[[1,0,0,0],[0,1,0,0]]"]);
    // 1 + q k vanishes in symmetrization at q = i
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(dist(quat(&v["records"][0]["value"]), [0.5, 0.0, 0.0, -0.5]) < 1e-14);
    assert!(v["records"][1]["error"].as_str().unwrap().contains("pole"));

    let input = format!(r#"{{"f":{f},"op":"eta"}}"#);
    let v = json(&run(&["eval", "--input", &input, "--probes", "[[0,0,2,0]]"]));
    assert_eq!(v["side"], "right");
    // eta(f)(q) = 1 - k q  at q = 2j is 1 - 2kj = 1 + 2i
    assert!(dist(quat(&v["records"][0]["value"]), [1.0, 2.0, 0.0, 0.0]) < 1e-14);
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["pass"] == true && p["threshold"].is_number()));

    let out = run(&["verify", "laplace", "--tol", "1e-5"]);
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn impossible_threshold_fails_with_exit_one() {
    let out = run(&["verify", "regularity", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let grid = r#"{"real":{"start":0.5,"stop":2.5,"count":5},"units":[[1,0,0],[0,1,1]],"imag":{"start":0,"stop":2,"count":3}}"#;
    let a = run(&["table", "--input", EXP_J, "--probes", grid]);
    let b = run(&["table", "--input", EXP_J, "--probes", grid]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["verify", "all", "--seed", "11"]);
    let b = run(&["verify", "all", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "all", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let grid = r#"{"real":{"start":1,"stop":2,"count":2},"units":[[0,0,1]],"imag":{"start":0,"stop":1,"count":2}}"#;
    let js = json(&run(&["transform", "--input", EXP_J, "--probes", grid]));
    let csv = String::from_utf8(run(&["transform", "--input", EXP_J, "--probes", grid, "--format", "csv"]).stdout).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let recs = js["records"].as_array().unwrap();
    assert_eq!(rows.len(), recs.len());
    for (row, rec) in rows.iter().zip(recs) {
        let mut from_json: Vec<f64> = quat(&rec["s"]).into();
        from_json.extend(quat(&rec["value"]));
        from_json.push(rec["est_error"].as_f64().unwrap());
        let from_csv: Vec<f64> = row[..9].iter().map(|c| c.parse().unwrap()).collect();
        assert_eq!(from_json, from_csv);
    }
}

#[test]
fn grid_follows_canonical_order() {
    let grid = r#"{"real":{"start":2,"stop":1,"count":2},"units":[[0,1,0],[1,0,0]],"imag":{"start":1,"stop":0.5,"count":2}}"#;
    let v = json(&run(&["transform", "--input", EXP_J, "--probes", grid]));
    let s: Vec<[f64; 4]> = v["records"].as_array().unwrap().iter().map(|r| quat(&r["s"])).collect();
    assert_eq!(
        s,
        vec![
            [1.0, 0.0, 0.5, 0.0],
            [1.0, 0.0, 1.0, 0.0],
            [1.0, 0.5, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
            [2.0, 0.0, 0.5, 0.0],
            [2.0, 0.0, 1.0, 0.0],
            [2.0, 0.5, 0.0, 0.0],
            [2.0, 1.0, 0.0, 0.0],
        ]
    );
}

#[test]
fn files_for_input_probes_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    let probes = dir.path().join("p.json");
    let out = dir.path().join("out.csv");
    std::fs::write(&input, r#"{"kind":"heaviside_shift","delay":1,"f":{"kind":"exp","b":[0,0,1,0]}}"#).unwrap();
    std::fs::write(&probes, r#"{"points":[[2,0,0,0]]}"#).unwrap();
    let o = run(&[
        "transform",
        "--side",
        "right",
        "--input",
        input.to_str().unwrap(),
        "--probes",
        probes.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').take(8).map(|c| c.parse().unwrap()).collect();
    // e^{-2} (s + j)/(s^2 + 1) at s = 2
    let e = (-2.0f64).exp();
    let expect = [2.0 * e / 5.0, 0.0, e / 5.0, 0.0];
    assert!(dist([row[4], row[5], row[6], row[7]], expect) < 1e-9);
}
