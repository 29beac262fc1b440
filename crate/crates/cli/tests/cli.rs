use std::process::{Command, Output};

use serde_json::Value;

fn qct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qct"))
        .args(args)
        .env_remove("QCT_OUT_DIR")
        .output()
        .expect("qct runs")
}

fn json(args: &[&str]) -> Value {
    let out = qct(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json document")
}

fn code(args: &[&str]) -> i32 {
    qct(args).status.code().expect("exit code")
}

#[test]
fn index_of_first_character() {
    let doc = json(&["index", "--spec", "char:1"]);
    assert_eq!(doc["result"]["winding"], 1);
    assert_eq!(doc["result"]["operator_index"], -1);
}

#[test]
fn example_h_sup_matches_direct_sum() {
    let doc = json(&["example-h", "--terms", "1000", "--report", "sup"]);
    let direct: f64 = (2..=1000u32).map(|k| 1.0 / (k as f64 * (k as f64).ln())).sum();
    let got = doc["result"]["sup_at_zero"].as_f64().unwrap();
    assert!((got - direct).abs() < 1e-12 * direct, "{got} vs {direct}");
}

#[test]
fn coeffs_of_constant_character() {
    let doc = json(&["coeffs", "--spec", "char:0"]);
    let list = doc["result"]["coefficients"].as_array().unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0][0], 0);
    assert_eq!(list[0][1].as_f64(), Some(1.0));
    assert_eq!(list[0][2].as_f64(), Some(0.0));
}

#[test]
fn documents_embed_config_and_echo_spec() {
    let doc = json(&["winding", "--grid", "512", "--degree", "16", "--spec", "trig:[0,0.1,0;1,1,0]"]);
    assert_eq!(doc["command"], "winding");
    assert_eq!(doc["config"]["grid_size"], 512);
    assert_eq!(doc["config"]["degree"], 16);
    assert_eq!(doc["config"]["thresholds"]["delta"].as_f64(), Some(1e-6));
    assert_eq!(doc["specs"][0]["type"], "trig");
    assert_eq!(doc["specs"][0]["coeffs"][0][1], "0.1");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["oscillation", "--spec", "trig:[1,0.5,0;-1,0.5,0]"][..],
        &["classify", "--spec", "char:2", "--spec", "trig:[2,1,0;0,0.3,0]"][..],
        &["toeplitz-norms", "--spec", "trig:[0,2,0;1,0.5,0;-1,0.5,0]", "--ladder", "16,32"][..],
    ] {
        let a = qct(args);
        let b = qct(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn exit_codes_follow_error_kind() {
    // validation
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["winding", "--spec", "char:x"]), 1);
    assert_eq!(code(&["winding", "--grid", "100", "--spec", "char:1"]), 1);
    assert_eq!(code(&["winding", "--grid", "128", "--degree", "64", "--spec", "char:1"]), 1);
    assert_eq!(code(&["winding", "--radius", "1.5", "--spec", "char:1"]), 1);
    assert_eq!(code(&["winding"]), 1);
    assert_eq!(code(&["winding", "--format", "csv", "--spec", "char:1"]), 1);
    // precondition: not invertible
    assert_eq!(code(&["winding", "--spec", "trig:[0,0.5,0;1,0.5,0]"]), 1);
    // resolution
    assert_eq!(code(&["winding", "--degree", "4", "--grid", "16", "--radius", "0.999", "--spec", "char:7"]), 2);
    // numerical contract: windings disagree across stability radii
    let tree = r#"{"type":"product","factors":[{"type":"char","n":3},{"type":"exp","of":{"type":"trig","coeffs":[[2,"1.5","0"],[-2,"1.5","0"],[1,"0","-1.5"],[-1,"0","1.5"]]}}]}"#;
    let out = qct(&["winding", "--grid", "256", "--spec", tree]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("fredholm_index") && msg.contains("contract"), "{msg}");
}

#[test]
fn csv_series_and_output_directory() {
    let dir = std::env::temp_dir().join(format!("qct-cli-test-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_qct"))
        .args(["oscillation", "--format", "csv", "--spec", "trig:[1,0.5,0;-1,0.5,0]"])
        .env("QCT_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("oscillation.csv")).unwrap();
    assert!(csv.starts_with("scale,worst_oscillation\n"));
    assert!(csv.lines().count() > 3);

    let path = dir.join("nested").join("idx.json");
    let out = qct(&["index", "--spec", "char:-2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["operator_index"], 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn spec_file_accepts_json_tree() {
    let path = std::env::temp_dir().join(format!("qct-spec-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"type":"product","factors":[{"type":"char","n":-1},{"type":"exp_i","of":{"type":"trig","coeffs":[[1,"0.5","0"],[-1,"0.5","0"]]}}]}"#).unwrap();
    let doc = json(&["factor", "--spec-file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(doc["result"]["winding"], -1);
    assert!(doc["result"]["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn toeplitz_commands() {
    let doc = json(&["toeplitz-index", "--spec", "char:2", "--ladder", "32,64"]);
    for e in doc["result"]["estimates"].as_array().unwrap() {
        assert_eq!(e["count"], 2);
        assert_eq!(e["operator_index"], -2);
    }
    let doc = json(&["semicommutator", "--spec", "char:1", "--spec", "char:-1", "--size", "16"]);
    assert_eq!(doc["result"]["numerical_rank"], 1);
    assert_eq!(doc["result"]["max_abs"].as_f64(), Some(1.0));
    let doc = json(&["toeplitz-norms", "--spec", "trig:[0,2,0;1,0.5,0;-1,0.5,0]", "--ladder", "32,64,128"]);
    assert_eq!(doc["result"]["bounded_by_symbol_sup"], true);
}

#[test]
fn classification_commands() {
    let doc = json(&["classify", "--spec", "char:1", "--spec", "char:2"]);
    assert_eq!(doc["result"]["decision"]["relation"], "different");
    let doc = json(&[
        "operator-classify",
        "--spec",
        "char:1",
        "--spec",
        "trig:[1,1,0;0,0.2,0]",
        "--ranks",
        "3,4",
    ]);
    assert_eq!(doc["result"]["relation"], "same");
    assert_eq!(doc["result"]["perturbation_ranks"][1], 4);
    let tree = r#"{"type":"exp_i","of":{"type":"builtin_h","terms":2,"scale":"2"}}"#;
    let doc = json(&["classify", "--spec", tree, "--ladder", "100,1000", "--exp-factor", "1", "--grid", "65536"]);
    assert_eq!(doc["result"]["rungs"].as_array().unwrap().len(), 2);
    assert_eq!(doc["result"]["verdict"], "unbounded_trend");
}

#[test]
fn transforms_and_ranges() {
    let doc = json(&["hilbert", "--spec", "trig:[1,0.5,0;-1,0.5,0]"]);
    let h = doc["result"]["hilbert"].as_array().unwrap();
    assert_eq!(h.len(), 2);
    assert!(doc["result"]["identity_residuals"]["double_hilbert"].as_f64().unwrap() < 1e-12);
    let doc = json(&["poisson", "--radius", "0.5", "--spec", "char:2"]);
    assert!((doc["result"]["sup_smoothed"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let doc = json(&["essrange", "--spec", r#"{"type":"indicator","arcs":[["0","3.141592653589793"]]}"#]);
    assert_eq!(doc["result"]["integer_check"]["verdict"], "oscillation_lower_bound");
}
