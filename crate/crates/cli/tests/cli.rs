use std::process::{Command, Output};

use serde_json::Value;

fn liouville(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .env_remove("LAMBDA_SIEVE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let out = liouville(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    liouville(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["classify", "--limit", "30"]), 0);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["greedy", "--alpha", "3/2"]), 1);
    assert_eq!(code(&["lmax", "--p", "9", "--i", "2"]), 1);
    assert_eq!(code(&["sum", "--set", "all", "--x", "2000000000"]), 2);
    assert_eq!(code(&["eval", "--set", "finite:4", "--n", "10"]), 3);
    assert_eq!(code(&["eval", "--set", "bogus", "--n", "10"]), 3);
    assert_eq!(code(&["--workers", "0", "classify", "--limit", "10"]), 3);
    assert_eq!(code(&["bench", "--reps", "2", "--sizes", "1000"]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
}

#[test]
fn json_report_shape() {
    let v = json(&["sum", "--set", "all", "--x", "1000"]);
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["request"]["command"], "sum");
    assert_eq!(v["payload"]["value"], -14);
    assert!(v["timing"]["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert!(v["budget_notes"].is_array());
}

#[test]
fn csv_has_header_row() {
    let out = liouville(&["--output", "csv", "classify", "--limit", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["p", "3", "7", "11", "23", "31", "47"]);
}

#[test]
fn plain_output_is_readable() {
    let out = liouville(&["charlike-sum", "--p", "5", "--n", "93"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-3"), "{text}");
}

#[test]
fn env_budget_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["sum", "--set", "all", "--x", "1000"])
        .env("LAMBDA_SIEVE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // the flag overrides the environment
    let out = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["--sieve-budget", "5000", "sum", "--set", "all", "--x", "1000"])
        .env("LAMBDA_SIEVE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn results_do_not_depend_on_worker_count() {
    for args in [
        ["sum", "--set", "nonres:7", "--x", "3000000"],
        ["trace", "--set", "cubegap", "--x", "2500000"],
    ] {
        let mut seen = Vec::new();
        for w in ["1", "3"] {
            let mut full = vec!["--workers", w];
            full.extend_from_slice(&args);
            seen.push(json(&full)["payload"].clone());
        }
        assert_eq!(seen[0], seen[1], "{args:?}");
    }
}

#[test]
fn verify_is_seeded_and_passes() {
    let a = json(&["--seed", "11", "verify", "--scale", "small"]);
    let b = json(&["--seed", "11", "verify", "--scale", "small"]);
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["payload"]["failed"], 0);
}

#[test]
fn greedy_and_phisigma() {
    let g = json(&["greedy", "--alpha", "1/2", "--primes", "3"]);
    let primes: Vec<String> = g["payload"]["primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().map(str::to_owned).unwrap_or_else(|| p.to_string()))
        .collect();
    assert_eq!(primes, ["5", "11", "23"]);
    let f = json(&["phisigma", "--q", "5/9", "--bound", "1000"]);
    assert_eq!(f["payload"]["result"]["outcome"], "found");
    assert_eq!(f["payload"]["result"]["z"], 55);
}
