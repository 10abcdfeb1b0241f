use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcm-ident"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_worked_example() {
    let v = json(&run(&["--starts", "60", "analyze", &fixture("star4_12.json")]));
    assert_eq!(v["command"], "analyze");
    let r = &v["result"];
    assert_eq!(r["cross_check"]["pass"], true);
    let d1 = r["coefficients"].as_array().unwrap().iter().find(|c| c["name"] == "d1").unwrap();
    assert_eq!(d1["poly"], "1*k13*k21 + 1*k14*k21");
    let class = |p: &str| {
        r["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|v| v["parameter"] == p)
            .map(|v| v["class"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(class("k21"), "GloballyIdentifiable");
    assert_eq!(class("k12"), "SLING");
    assert_eq!(class("k13"), "SLING");
}

#[test]
fn leaky_model_uses_determinants() {
    let out = run(&["--method", "forest", "analyze", &fixture("leaky3.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("leaks"));
    let v = json(&run(&["--starts", "60", "analyze", &fixture("leaky3.json")]));
    assert_eq!(v["result"]["method"], "determinant");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"version\": 1, \"n\": 2, \"edges\": [[1,3]] ").unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/nonexistent/model.json"]).status.code(), Some(2));
    assert_eq!(
        run(&["mammillary", "-n", "2", "--input", "1", "--output-comp", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["table", "--n-max", "4"]).status.code(), Some(2));
}

#[test]
fn mammillary_maps_to_representative() {
    let v = json(&run(&["--starts", "40", "mammillary", "-n", "4", "--input", "3", "--output-comp", "1"]));
    let r = &v["result"];
    assert_eq!(r["family"]["family"], "2,1");
    assert_eq!(r["family"]["n"], 4);
    assert!(r["identities"].as_array().unwrap().iter().all(|i| i["holds"] == true));
}

#[test]
fn table_matches_golden() {
    let golden: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", "table6.md"].iter().collect();
    let out = run(&["table", "--n-max", "6", "--format", "md"]);
    assert!(out.status.success());
    let want = std::fs::read_to_string(golden).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn verify_all_families() {
    let v = json(&run(&["verify", "--family", "all", "--n-max", "7"]));
    let text = v["result"].to_string();
    assert!(!text.contains("\"pass\":false"), "{text}");
}

#[test]
fn output_file_and_thread_count_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = run(&["--output", path.to_str().unwrap(), "table", "--n-max", "5"]);
    assert!(out.status.success());
    let written = std::fs::read(&path).unwrap();
    let single = Command::new(env!("CARGO_BIN_EXE_lcm-ident"))
        .env("LCM_IDENT_THREADS", "1")
        .args(["table", "--n-max", "5"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(written).unwrap().trim_end(), String::from_utf8(single.stdout).unwrap().trim_end());
}

#[test]
fn fiber_shows_interchangeable_rates() {
    let v = json(&run(&["--starts", "60", "fiber", &fixture("star4_12.json")]));
    let text = v["result"].to_string();
    assert!(text.contains("distinct_counts"), "{text}");
}
