use std::process::{Command, Output};

use serde_json::Value;

fn voalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voalab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = voalab(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

#[test]
fn structure_check_and_fault_injection() {
    let (v, code) = json(&["--n", "3", "structure-check"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let (v, code) = json(&["--n", "3", "structure-check", "--inject-fault"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn singular_check_reports_witness() {
    let (v, _) = json(&["--n", "3", "singular-check", "--vector", "chi"]);
    assert_eq!(v["singular"], true);
    let (v, _) = json(&["--n", "3", "singular-check", "--vector", "chi-plus"]);
    assert_eq!(v["singular"], false);
    assert_eq!(v["witness"]["mode"], "E[3,4](0)");
    let (v, _) = json(&["--n", "2", "singular-check", "--state", "E[1,3](-1) E[1,4](-1) |0>"]);
    assert_eq!(v["singular"], true);
}

#[test]
fn c2_reduce_of_u_vector() {
    let (v, code) = json(&["--n", "3", "c2-reduce", "--u", "4,5,4,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["psi_reduced_bottom_block"], "X[4,4]*X[5,5] - X[4,5]*X[5,4]");
}

#[test]
fn geometry_and_lattice_commands() {
    let (v, _) = json(&["--n", "3", "orbit-member", "--matrix", "[[0,1,0],[0,0,0],[0,0,0]]"]);
    assert_eq!(v["in_min_orbit_closure"], true);
    assert_eq!(v["rank"], 1);
    let (v, _) = json(&["--n", "3", "orbit-member", "--matrix", "[[2,0,0],[0,-1,0],[0,0,-1]]"]);
    assert_eq!(v["in_min_orbit_closure"], false);
    assert_eq!(v["in_sheet_closure"], true);
    assert_eq!(v["sheet_shift"], "-1");
    let (v, _) = json(&["lattice-decompose", "--lambda", "[1,0,0]"]);
    assert_eq!(v["lambda0"], "1/3");
    assert_eq!(v["class_lambda0"], v["class_lambda_vee"]);
    let (v, _) = json(&["--n", "5", "discriminant"]);
    assert_eq!(v["invariant_factors"], serde_json::json!(["5"]));
}

#[test]
fn malformed_input_exits_2_with_position() {
    let out = voalab(&["--n", "2", "singular-check", "--state", "E[1,3](-1) E[1,"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1, column 16"), "{err}");
    let out = voalab(&["--n", "1", "minor-cover"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_output_is_byte_identical() {
    let args = ["suite", "--n-min", "2", "--n-max", "3", "--seed", "7"];
    let a = voalab(&args);
    let b = voalab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["failed"], 0);
}

#[test]
fn suite_fault_names_reproducer() {
    let (v, code) = json(&["suite", "--n-min", "2", "--n-max", "2", "--inject-fault"]);
    assert_eq!(code, 1);
    let failing: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    for c in failing {
        assert!(c["reproduce"].as_str().unwrap().starts_with("voalab "));
    }
}

#[test]
fn out_file_and_text_format() {
    let dir = std::env::temp_dir().join(format!("voalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = voalab(&[
        "--n",
        "2",
        "--out",
        path.to_str().unwrap(),
        "anomaly-check",
        "--rho",
        "[[1],[1]]",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "anomaly-check");
    let out = voalab(&["--format", "text", "--n", "3", "discriminant"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("invariant_factors"));
    std::fs::remove_dir_all(&dir).ok();
}
