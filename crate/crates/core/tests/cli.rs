use std::process::Command;

use dynsamp::cli::{run_from, EXIT_INPUT, EXIT_NEVER_FRAME, EXIT_OK};
use serde_json::Value;

const K1212: &str =
    r#"{"schema":"dynsamp/1","factors":[4],"symbol_re":[1,2,1,2],"symbol_im":[0,0,0,0]}"#;

fn plan(omega: &[usize], depth: usize) -> String {
    let om: Vec<Vec<usize>> = omega.iter().map(|&i| vec![i]).collect();
    serde_json::json!({"schema":"dynsamp/1","factors":[4],"omega":om,"depths":vec![depth; omega.len()]}).to_string()
}

fn run(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["dynsamp"];
    full.extend_from_slice(args);
    let out = run_from(full);
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

#[test]
fn check_reports_frame_and_never_frame() {
    let (code, v) = run(&[
        "check",
        "--kernel-json",
        K1212,
        "--plan-json",
        &plan(&[1, 2], 1),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "frame");
    assert_eq!(v["schema"], "dynsamp/1");

    let (code, v) = run(&[
        "check",
        "--kernel-json",
        K1212,
        "--plan-json",
        &plan(&[1, 3], 1),
    ]);
    assert_eq!(code, EXIT_NEVER_FRAME);
    assert_eq!(v["verdict"], "never-frame");
}

#[test]
fn shallow_plan_is_not_frame() {
    let k = r#"{"factors":[4],"symbol_re":[1,2,3,4]}"#;
    let (code, v) = run(&["check", "--kernel-json", k, "--plan-json", &plan(&[0], 1)]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "not-frame");
}

#[test]
fn bad_input_exits_one() {
    let (code, _) = run(&["check", "--kernel-json", "{", "--plan-json", &plan(&[1], 0)]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _) = run(&[
        "check",
        "--kernel-json",
        K1212,
        "--plan-json",
        &plan(&[7], 0),
    ]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _) = run(&["check", "--plan-json", &plan(&[1], 0)]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn spark_subcommand() {
    let (code, v) = run(&["spark", "--factors", "5", "--rows", "0,2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["full_spark"], true);
    assert_eq!(v["spark"], 3);

    let (_, v) = run(&["spark", "--factors", "4", "--rows", "0,2"]);
    assert_eq!(v["full_spark"], false);
    assert_eq!(v["witness"], serde_json::json!([[0], [2]]));

    let (code, _) = run(&["spark", "--factors", "4"]);
    assert_eq!(code, EXIT_INPUT);

    let (_, v) = run(&["spark", "--factors", "3,3", "--rows", "0:0,1:1"]);
    assert_eq!(v["full_spark"], false);
}

#[test]
fn construct_subcommand() {
    let (code, v) = run(&[
        "construct",
        "--recipe",
        "sym-octagonal",
        "--d",
        "5",
        "--i1",
        "0",
        "--i2",
        "1",
        "--j1",
        "0",
        "--j2",
        "1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["omega"].as_array().unwrap().len(), 8);
    assert!(v["depths"].as_array().unwrap().iter().all(|l| l == 5));

    let (code, v) = run(&[
        "construct",
        "--recipe",
        "periodic-w",
        "--d",
        "6",
        "--m",
        "3",
        "--set",
        "0,1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["periodic"]["m"], 3);
    assert_eq!(v["omega"], serde_json::json!([[0], [1], [3], [4]]));

    let (code, v) = run(&[
        "construct",
        "--recipe",
        "gcd-pair",
        "--d",
        "9",
        "--i1",
        "0",
        "--i2",
        "3",
    ]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["divisor"], 3);

    let (code, v) = run(&[
        "construct",
        "--recipe",
        "gcd-pair",
        "--d",
        "4",
        "--i1",
        "1",
        "--i2",
        "2",
        "--kernel-json",
        K1212,
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["depths"], serde_json::json!([1, 1]));
}

#[test]
fn constructed_plan_feeds_check() {
    let out = run_from([
        "dynsamp",
        "construct",
        "--recipe",
        "periodic-w",
        "--d",
        "6",
        "--m",
        "3",
        "--set",
        "0,2",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let k = r#"{"factors":[6],"symbol_re":[1,2,3,4,5,6]}"#;
    let (code, v) = run(&["check", "--kernel-json", k, "--plan-json", &out.stdout]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["periodic"]["verdict"], "frame");
}

#[test]
fn simulate_subcommand() {
    let (code, v) = run(&[
        "simulate",
        "--kernel-json",
        K1212,
        "--plan-json",
        &plan(&[1, 2], 1),
        "--f",
        "1,-2,3,0.5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(v["relative_error"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["result"]["exact_flag"], true);

    let (code, v) = run(&[
        "simulate",
        "--kernel-json",
        K1212,
        "--plan-json",
        &plan(&[1, 3], 3),
        "--seed",
        "4",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["exact_flag"], false);
}

#[test]
fn search_subcommand() {
    let (code, v) = run(&["search", "--kernel-json", K1212]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["size"], 2);
    assert_eq!(
        v["sets"],
        serde_json::json!([[[0], [1]], [[0], [3]], [[1], [2]], [[2], [3]]])
    );
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run_from([
        "dynsamp",
        "spark",
        "--factors",
        "7",
        "--rows",
        "1,2,4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["full_spark"], true);
}

#[test]
fn kernel_and_plan_files() {
    let dir = tempfile::tempdir().unwrap();
    let kp = dir.path().join("k.json");
    let pp = dir.path().join("p.json");
    std::fs::write(&kp, K1212).unwrap();
    std::fs::write(&pp, plan(&[0, 1], 1)).unwrap();
    let (code, _) = run(&[
        "check",
        "--kernel",
        kp.to_str().unwrap(),
        "--plan",
        pp.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, _) = run(&[
        "check",
        "--kernel",
        "/nonexistent.json",
        "--plan",
        pp.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn binary_exit_codes_and_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_dynsamp");
    let out = Command::new(bin)
        .args([
            "check",
            "--kernel-json",
            K1212,
            "--plan-json",
            &plan(&[1, 3], 2),
        ])
        .env("DYNSAMP_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NEVER_FRAME));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "never-frame");

    let out = Command::new(bin)
        .args(["spark", "--factors", "4", "--rows", ""])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(!out.stderr.is_empty());
}

#[test]
fn tolerance_chain_exits_four() {
    let sym: Vec<f64> = (0..16).map(|i| 1.0 + 0.9e-8 * i as f64).collect();
    let k = serde_json::json!({"factors":[16],"symbol_re":sym}).to_string();
    let p = serde_json::json!({"factors":[16],"omega":[[0]],"depths":[0]}).to_string();
    let (code, v) = run(&["check", "--kernel-json", &k, "--plan-json", &p]);
    assert_eq!(code, 4);
    assert_eq!(v["projection"]["ambiguous"], true);
    let (code, _) = run(&[
        "check",
        "--kernel-json",
        &k,
        "--plan-json",
        &p,
        "--group-tol",
        "1e-12",
    ]);
    assert_eq!(code, 2);
}
