use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ballmaps"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(value).unwrap()).unwrap();
    p
}

fn catalog_file(dir: &TempDir, name: &str) -> PathBuf {
    let p = dir.path().join(format!("{name}.json"));
    let out = run(&["construct", "catalog", name, "--out", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_faran3() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "faran-3");
    let out = run(&["analyze", s(&f), "--require-proper"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["properness"]["proper"], json!(true));
    assert_eq!(v["full_unitary_test"]["is_un_invariant"], json!(true));
    assert_eq!(v["strict_stabilizer"]["order"], json!(2));
    assert_eq!(v["group"]["block_partition"], json!([[1, 2]]));
    assert_eq!(v["tolerances"]["eq"], json!(1e-9));
}

#[test]
fn analyze_example_7_2_has_trivial_stabilizers() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "example-7-2");
    let v = stdout_json(&run(&["analyze", s(&f)]));
    assert_eq!(v["torus_test"]["is_torus_invariant"], json!(false));
    assert_eq!(v["group"]["permutation_stabilizer"], json!([[1, 2]]));
}

#[test]
fn tolerance_flags_are_echoed() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "faran-1");
    let v = stdout_json(&run(&["analyze", s(&f), "--tol-eq", "1e-7"]));
    assert_eq!(v["tolerances"]["eq"], json!(1e-7));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{ not json").unwrap();
    assert_eq!(run(&["analyze", s(&p)]).status.code(), Some(2));
    assert_eq!(run(&["analyze", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(run(&["construct", "catalog", "faran-9"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn non_proper_map_fails_verification() {
    let dir = TempDir::new().unwrap();
    let z1 = json!({"nvars": 2, "terms": [{"exp": [1, 0], "re": 1.0, "im": 0.0}]});
    let f = write(&dir, "dup.json", &json!({"n": 2, "numerator": [z1, z1]}));
    let out = run(&["analyze", s(&f), "--require-proper"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["properness"]["proper"], json!(false));
    let out = run(&["sample", s(&f), "--count", "200"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["pass"], json!(false));
}

#[test]
fn tensor_power_construction() {
    let v = stdout_json(&run(&["construct", "power", "--n", "2", "--m", "3"]));
    assert_eq!(v["n"], json!(2));
    assert_eq!(v["numerator"].as_array().unwrap().len(), 4);
}

#[test]
fn constructions_compose() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "faran-1");
    let b = catalog_file(&dir, "faran-3");
    for args in [
        vec!["construct", "tensor", s(&a), s(&b)],
        vec!["construct", "oplus", s(&a), s(&b), "--weights", "0.6,0.8"],
        vec!["construct", "juxtapose", s(&a), s(&b), "--theta", "0.4"],
        vec!["construct", "descend", s(&b), s(&a)],
        vec!["construct", "whitney", "--n", "3"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let list = stdout_json(&run(&["construct", "catalog", "--list"]));
    assert!(list.as_array().unwrap().contains(&json!("faran-4")));
}

#[test]
fn member_and_compose() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "faran-2");
    let swap = write(&dir, "swap.json", &json!({"u": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}));
    let v = stdout_json(&run(&["member", s(&f), s(&swap)]));
    assert_eq!(v["member"], json!(false));
    let phi = write(
        &dir,
        "phi.json",
        &json!({"u": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]], "a": [[0.5, 0.0], [0.0, 0.0]]}),
    );
    let id = catalog_file(&dir, "faran-1");
    assert_eq!(stdout_json(&run(&["member", s(&id), s(&phi)]))["member"], json!(true));
    assert!(run(&["compose", "source", s(&f), s(&phi)]).status.success());
    let f3 = catalog_file(&dir, "faran-3");
    let o = [0.0, 0.0];
    let l = [1.0, 0.0];
    let cycle = write(&dir, "cycle.json", &json!({"u": [[o, l, o], [o, o, l], [l, o, o]], "a": [[0.3, 0.0], o, o]}));
    let out = run(&["compose", "target", s(&f3), s(&cycle)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn realize_alternating_group() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "a3.json", &json!({"n": 3, "generators": [[2, 3, 1]]}));
    let map = dir.path().join("map.json");
    let out = run(&["realize", "subgroup", s(&spec), "--out", s(&map)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stderr).expect("summary on stderr");
    assert_eq!(summary["proper"], json!(true));
    assert_eq!(summary["sample"]["pass"], json!(true));
    assert_eq!(summary["diagonal_stabilizer_trivial"], json!(true));
    assert_eq!(summary["stabilizer_matches"], json!(true));
    assert_eq!(summary["permutation_stabilizer"], json!([[1, 2, 3], [2, 3, 1], [3, 1, 2]]));
    let f: Value = serde_json::from_str(&fs::read_to_string(&map).unwrap()).unwrap();
    assert_eq!(f["numerator"].as_array().unwrap().len(), summary["target_dim"].as_u64().unwrap() as usize);
}

#[test]
fn realize_symmetric_and_from_invariants() {
    let out = run(&["realize", "symmetric", "--n", "2"]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["permutation_stabilizer"], json!([[1, 2], [2, 1]]));

    let dir = TempDir::new().unwrap();
    // Sign group z ↦ −z on C^1 with invariant z².
    let spec = write(
        &dir,
        "inv.json",
        &json!({
            "generators": [[[[-1.0, 0.0]]]],
            "invariants": [{"nvars": 1, "terms": [{"exp": [2], "re": 1.0, "im": 0.0}]}]
        }),
    );
    let out = run(&["realize", "from-invariants", s(&spec)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn pad_and_emit_system() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "p.json",
        &json!({"n": 2, "numerator": [{"nvars": 2, "terms": [
            {"exp": [0, 0], "re": 1.0, "im": 0.0},
            {"exp": [1, 0], "re": 1.0, "im": 0.0},
            {"exp": [0, 1], "re": 1.0, "im": 0.0}
        ]}]}),
    );
    let v = stdout_json(&run(&["pad", s(&p)]));
    assert!(v["pad"]["epsilon"].as_f64().unwrap() > 0.0);
    let forced = run(&["pad", s(&p), "--epsilon", "2"]);
    assert_eq!(forced.status.code(), Some(3));

    let f = catalog_file(&dir, "faran-2");
    let out = run(&["emit-system", s(&f)]);
    assert!(out.status.success());
    assert!(stdout_json(&out).is_object());
}

#[test]
fn capability_error_exits_4() {
    let dir = TempDir::new().unwrap();
    let n = 9;
    let comps: Vec<Value> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            json!({"nvars": n, "terms": [{"exp": e, "re": 1.0, "im": 0.0}]})
        })
        .collect();
    let f = write(&dir, "id9.json", &json!({"n": n, "numerator": comps}));
    assert_eq!(run(&["analyze", s(&f), "--strict"]).status.code(), Some(4));
}

#[test]
fn seeded_commands_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "example-7-2");
    let a = run(&["sample", s(&f), "--seed", "42", "--count", "300"]);
    let b = run(&["sample", s(&f), "--seed", "42", "--count", "300"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["seed"], json!(42));
    let c = run(&["analyze", s(&f)]);
    let d = run(&["analyze", s(&f)]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn stdin_input() {
    let dir = TempDir::new().unwrap();
    let f = catalog_file(&dir, "faran-4");
    let text = fs::read(&f).unwrap();
    let mut child = bin()
        .args(["analyze", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["strict_stabilizer"]["order"], json!(3));
}
