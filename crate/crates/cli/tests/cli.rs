//! End-to-end tests of the `tradeoff` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tradeoff"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("tradeoff-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn envelope_fixture_reports_breakpoints() {
    let text = stdout(&["envelope", "--fixture", "halfsum", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["breakpoints"][0], "1/2");
    assert_eq!(v["breakpoints"][1], "3/4");
    assert_eq!(v["breakpoints"][2], "7/8");
    assert_eq!(v["anchor"], "0");
    assert_eq!(v["domain_end"], "inf");
}

#[test]
fn exceptional_csv_lists_all_vertices() {
    // CSV is this command's default format
    let text = stdout(&["exceptional", "--fixture", "halfsum", "--n", "8"]);
    let explicit = stdout(&[
        "exceptional",
        "--fixture",
        "halfsum",
        "--n",
        "8",
        "--format",
        "csv",
    ]);
    assert_eq!(text, explicit);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], "alpha,g_plus,g_minus,spread");
    assert_eq!(lines[1], "1/2,0,-1,1");
    assert_eq!(lines[8], "255/256,-7,-8,1");
}

#[test]
fn exceptional_is_empty_for_constant_regularizer() {
    let path = tmp_path("constant-g.json");
    std::fs::write(
        &path,
        r#"{"m":1,"backend":"exact","candidates":[
            {"id":"a","f":"0","g":["5"]},
            {"id":"b","f":"1","g":["5"]}
        ]}"#,
    )
    .unwrap();
    let out = run(&[
        "exceptional",
        "--table",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "alpha,g_plus,g_minus,spread\n"
    );
    std::fs::remove_file(&path).ok();
}

#[test]
fn fixture_round_trips_through_a_file() {
    let path = tmp_path("halfsum3.json");
    let saved = run(&[
        "fixture",
        "halfsum",
        "--n",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(saved.status.success());
    let from_file = stdout(&["envelope", "--table", path.to_str().unwrap()]);
    let from_fixture = stdout(&["envelope", "--fixture", "halfsum", "--n", "3"]);
    assert_eq!(from_file, from_fixture);
    std::fs::remove_file(&path).ok();
}

#[test]
fn analyze_reports_vertex_ties() {
    let text = stdout(&[
        "analyze",
        "--fixture",
        "halfsum",
        "--n",
        "3",
        "--alpha",
        "3/4",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["argmin"], serde_json::json!(["1", "2"]));
    assert_eq!(v[0]["g_min"], "-2");
    assert_eq!(v[0]["g_max"], "-1");
    assert_eq!(v[0]["exceptional"], true);
}

#[test]
fn input_errors_exit_2() {
    let missing = run(&["envelope", "--table", "/nonexistent/nothing.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let bad_alpha = run(&["analyze", "--fixture", "halfsum", "--alpha", "one-half"]);
    assert_eq!(bad_alpha.status.code(), Some(2));

    let bad_fixture = run(&["envelope", "--fixture", "nope"]);
    assert_eq!(bad_fixture.status.code(), Some(2));

    let no_input = run(&["envelope"]);
    assert_eq!(no_input.status.code(), Some(2));

    let malformed = tmp_path("malformed.json");
    std::fs::write(
        &malformed,
        r#"{"m":1,"candidates":[{"id":"a","f":"1/0","g":["1"]}]}"#,
    )
    .unwrap();
    let parse_err = run(&["envelope", "--table", malformed.to_str().unwrap()]);
    assert_eq!(parse_err.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&parse_err.stderr);
    assert!(
        msg.contains("candidate 0"),
        "diagnostic names the row: {msg}"
    );
    std::fs::remove_file(&malformed).ok();
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let args = [
        "sequences",
        "--fixture",
        "halfsum",
        "--n",
        "3",
        "--alpha",
        "3/5",
        "--policy",
        "random",
        "--seed",
        "99",
    ];
    assert_eq!(stdout(&args), stdout(&args));

    let sweep = ["penalty-demo", "--side", "21", "--format", "csv"];
    assert_eq!(stdout(&sweep), stdout(&sweep));
}

#[test]
fn threads_do_not_change_output() {
    let one = stdout(&["penalty-demo", "--side", "21", "--format", "csv"]);
    let four = stdout(&[
        "penalty-demo",
        "--side",
        "21",
        "--format",
        "csv",
        "--threads",
        "4",
    ]);
    assert_eq!(one, four);
}

#[test]
fn multiscan_summary_matches_the_augmented_family() {
    let text = stdout(&[
        "multiscan",
        "--fixture",
        "halfsum-g2",
        "--n",
        "3",
        "--axis",
        "1",
        "--grid",
        "0:9/10:10",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["axis"], 1);
    assert_eq!(v["lines"], 10);
    assert_eq!(v["max_count"], 3);
    assert_eq!(v["cell_fraction"][0]["fraction"], "3/10");
    assert_eq!(v["cell_fraction"][1]["fraction"], "3/100");
    assert_eq!(v["concavity"]["pass"], true);
    assert_eq!(v["semicontinuity"]["pass"], true);

    // the trivial axis carries nothing
    let text = stdout(&[
        "multiscan",
        "--fixture",
        "halfsum-g2",
        "--n",
        "3",
        "--axis",
        "2",
        "--grid",
        "0:9/10:10",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["max_count"], 0);
}

#[test]
fn critpoints_flags_only_the_untilted_weight() {
    let text = stdout(&[
        "critpoints",
        "--f",
        "1,0,-2,0,1",
        "--g",
        "0,1",
        "--window",
        "-2:2",
        "--alphas",
        "0,1/10,2/10,3/10",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["flagged"], true);
    let gap = v[0]["groups"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|g| g["violations"].as_array().unwrap().clone())
        .next()
        .unwrap();
    assert_eq!(gap["gap"], "2");
    for k in 1..4 {
        assert_eq!(v[k]["flagged"], false, "alpha {k}/10");
    }
}

#[test]
fn penalty_demo_reports_single_levels_off_exceptional_points() {
    let text = stdout(&["penalty-demo"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 50);
    assert_eq!(v["monotone"], true);
    for row in rows {
        if row["exceptional"] == false {
            assert_eq!(row["g_min"], row["g_max"]);
        }
    }
}

#[test]
fn penalty_demo_endpoints_behave() {
    // alpha = 0: pure fidelity, the target point (1, 1) is on the grid;
    // huge alpha: the feasible grid point nearest the target wins, g = 0
    let text = stdout(&["penalty-demo", "--alphas", "0,1024", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "0,0,1,1,false,30_30");
    assert_eq!(lines[2], "1024,1/2,0,0,false,25_25");
}

#[test]
fn decimal_flag_renders_fixed_point() {
    let text = stdout(&[
        "exceptional",
        "--fixture",
        "halfsum",
        "--n",
        "2",
        "--format",
        "csv",
        "--decimal",
        "3",
    ]);
    assert!(text.contains("0.500,0.000,-1.000,1.000"));
}

#[test]
fn approx_backend_runs_indicative_scans() {
    let text = stdout(&[
        "analyze",
        "--fixture",
        "halfsum",
        "--n",
        "3",
        "--alpha",
        "0.75",
        "--backend",
        "approx",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["exceptional"], true);
    assert_eq!(v[0]["g_min"], -2.0);
}

#[test]
fn oracle_check_passes_on_fixture() {
    let out = run(&[
        "envelope",
        "--fixture",
        "halfsum",
        "--n",
        "5",
        "--check-oracle",
        "300",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 mismatches"));
}
