use std::process::{Command, Output};

fn minweight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minweight"))
        .args(args)
        .env_remove("MINWEIGHT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = minweight(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn bound_digits() {
    let v = json(&["bound", "--k", "11", "--p", "2", "--format", "json"]);
    assert_eq!(v["digits"], serde_json::json!([1, 1, 0, 1]));
    assert_eq!(v["bound"], "8");
    let v = json(&["bound", "--k", "4", "--q", "25", "--format", "json"]);
    assert_eq!(v["p"], 5);
    assert_eq!(v["bound"], "5");
}

#[test]
fn bound_check_on_polynomial() {
    let v = json(&["bound", "--poly", "x^3 - 3*x - 2", "--root=-1", "--format", "json"]);
    assert_eq!(v["k"], 2);
    assert_eq!(v["holds"], true);
    assert_eq!(v["tight"], true);
}

#[test]
fn construct_over_rationals() {
    let o = minweight(&["construct", "--n", "3", "--k", "2", "--zeros", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x^3 - 3*x - 2"));
    let v = json(&["construct", "--n", "4", "--k", "2", "--all", "--format", "json"]);
    assert_eq!(v["count"], "6");
    assert_eq!(v["polynomials"].as_array().unwrap().len(), 6);
}

#[test]
fn construct_rejects_wrong_support_size() {
    let o = minweight(&["construct", "--n", "3", "--k", "2", "--zeros", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn count_formats() {
    let v = json(&["count", "--q", "5", "--n", "3", "--k", "1", "--format", "json"]);
    assert_eq!(v["counts"], serde_json::json!({"2": "3", "3": "9", "4": "13"}));
    assert_eq!(v["total"], "25");
    let o = minweight(&["count", "--q", "5", "--n", "3", "--k", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "w,count\n2,3\n3,9\n4,13\n");
}

#[test]
fn count_outside_regime() {
    let o = minweight(&["count", "--q", "5", "--n", "6", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("requires n < p"));
    assert_eq!(minweight(&["count", "--q", "6", "--n", "2", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn enumerate_matches_count_and_ignores_workers() {
    let one = minweight(&["enumerate", "--q", "7", "--n", "5", "--k", "2", "--format", "json"]);
    let four = minweight(&[
        "enumerate", "--q", "7", "--n", "5", "--k", "2", "--workers", "4", "--format", "json",
    ]);
    assert_eq!(one.stdout, four.stdout);
    let e: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    let c = json(&["count", "--q", "7", "--n", "5", "--k", "2", "--format", "json"]);
    assert_eq!(e["distribution"]["counts"], c["counts"]);
    assert!(e.get("wall_time_ms").is_none());
    let t = json(&["enumerate", "--q", "5", "--n", "2", "--k", "1", "--timing", "--format", "json"]);
    assert!(t["wall_time_ms"].is_u64());
}

#[test]
fn enumerate_fixed_support() {
    let v = json(&["enumerate", "--q", "5", "--n", "3", "--k", "1", "--support", "0,2", "--format", "json"]);
    assert_eq!(v["count"], "3");
}

#[test]
fn budget_exceeded() {
    let o = minweight(&["enumerate", "--q", "13", "--n", "12", "--k", "1", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_minweight"))
        .args(["enumerate", "--q", "7", "--n", "5", "--k", "2"])
        .env("MINWEIGHT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_modes() {
    let o = minweight(&["verify", "--q", "7", "--n", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "formula matches enumeration (343 polynomials)\n");
    let v = json(&["verify", "--p", "2", "--max-degree", "6", "--format", "json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["violations"], serde_json::json!([]));
    let o = minweight(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("all checks passed\n"));
}

#[test]
fn usage_errors() {
    assert_eq!(minweight(&[]).status.code(), Some(2));
    assert_eq!(minweight(&["count", "--q", "5"]).status.code(), Some(2));
    assert_eq!(minweight(&["bound", "--k", "x"]).status.code(), Some(2));
    assert_eq!(minweight(&["--version"]).status.code(), Some(0));
}
