use serde_json::{json, Value};
use std::path::Path;
use std::process::{Command, Output};
use toric_mmp::json::{fan_from_json, pair_from_json, pair_to_json};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-mmp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

const ATIYAH_RAYS: &str = "[[0,0,1],[1,0,1],[1,1,1],[0,1,1]]";

fn atiyah(cones: &str) -> Value {
    serde_json::from_str(&format!(
        r#"{{"dim":3,"rays":{ATIYAH_RAYS},"cones":{cones}}}"#
    ))
    .unwrap()
}

#[test]
fn check_reports_properties() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        &json!({"dim": 2, "rays": [[1, 0], [1, 3]], "cones": [[0, 1]], "coeffs": ["0/1", "0/1"]}),
    );
    let out = run(&["--json", "check", &p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["valid"], json!(true));
    assert_eq!(v["complete"], json!(false));
    assert_eq!(v["terminal"], json!(false));

    let text = run(&["check", &p]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("terminal: false"));

    let bad = write(
        dir.path(),
        "bad.json",
        &json!({"dim": 2, "rays": [[1, 0], [2, 0]], "cones": [[0, 1]]}),
    );
    let out = run(&["--json", "check", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["valid"], json!(false));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(run(&["rank", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        run(&["rank", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["case-a", "3", "5"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn flop_decompose_atiyah() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", &atiyah("[[0,1,2],[0,2,3]]"));
    let y = write(dir.path(), "y.json", &atiyah("[[0,1,3],[1,2,3]]"));
    let out = run(&["--json", "flop-decompose", &x, &y]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["steps"][0]["k_defect_check"], json!("0/1"));

    let o = write(
        dir.path(),
        "o.json",
        &json!({"dim": 2, "rays": [[1, 0], [0, 1]], "cones": [[0, 1]]}),
    );
    let b = write(
        dir.path(),
        "b.json",
        &json!({"dim": 2, "rays": [[1, 0], [0, 1], [1, 1]], "cones": [[0, 2], [1, 2]]}),
    );
    let out = run(&["--json", "flop-decompose", &o, &b]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["k_equivalent"], json!(false));
    assert_eq!(v["comparison"], json!("y_ge_x"));
}

#[test]
fn hj_rank_and_case_a() {
    let out = run(&["hj", "5", "2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "chain: -3 -2");
    let v = json_of(&run(&["--json", "hj", "7", "3"]));
    assert_eq!(v["chain"], json!([-3, -2, -2]));

    let out = run(&["case-a", "5", "2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 3 4");

    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        &json!({"dim": 2, "rays": [[1, 0], [1, 3]], "cones": [[0, 1]], "coeffs": ["1/2", "0/1"]}),
    );
    assert_eq!(
        String::from_utf8_lossy(&run(&["rank", &p]).stdout).trim(),
        "6"
    );
}

#[test]
fn terminalize_and_mmp_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    // 1/3(1,1) in the basis (1/3,1/3), (0,1) of the group lattice
    let p = json!({
        "dim": 2,
        "rays": [[3, -1], [0, 1]],
        "cones": [[0, 1]],
        "coeffs": ["0/1", "0/1"],
        "lattice": [["1/3", "1/3"], ["0/1", "1/1"]],
    });
    let path = write(dir.path(), "q.json", &p);
    let out = run(&["--json", "terminalize", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["steps"][0]["psi_before"], json!("2/3"));
    let t = pair_from_json(&v["pair"]).unwrap();
    assert_eq!(t.fan.cones().len(), 2);
    assert_eq!(pair_from_json(&pair_to_json(&t)).unwrap(), t);

    let tp = write(dir.path(), "t.json", &v["pair"]);
    let out = run(&["--json", "mmp", &tp, "--base", "orthant"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["steps"].as_array().unwrap().is_empty());
}

#[test]
fn mckay_single_and_batch() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "a.json",
        &json!({"n": 3, "gens": [{"r": 3, "weights": [1, 1, 1]}]}),
    );
    let out = run(&["--json", "mckay", &g]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["checks"]["all_pass"], json!(true));
    assert_eq!(v["checks"]["order"], json!(3));
    fan_from_json(&v["y"]).unwrap();

    write(
        dir.path(),
        "b.json",
        &json!({"n": 2, "gens": [{"r": 4, "weights": [1, 2]}]}),
    );
    let out = run(&["mckay", "--batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("a.json: |G| = 3, all pass true"));
    assert!(text.contains("b.json: |G| = 4, all pass true"));
}

#[test]
fn generated_pairs_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&run(&["--json", "gen-flop-pair", "--seed", "3"]));
    let again = json_of(&run(&["--json", "gen-flop-pair", "--seed", "3"]));
    assert_eq!(v, again);
    let x = write(dir.path(), "x.json", &v["x"]);
    let y = write(dir.path(), "y.json", &v["y"]);
    let out = run(&["--json", "flop-decompose", &x, &y]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!json_of(&out)["steps"].as_array().unwrap().is_empty());
}
