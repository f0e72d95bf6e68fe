//! End-to-end checks of the `seqpivot` binary: golden replays, report
//! formats, determinism, and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqpivot"))
        .args(args)
        .env("SEQPIVOT_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn replay_tables_passes_on_a_clean_build() {
    let out = run(&["replay-tables"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("all reference tables reproduce bit-exactly"));
    assert_eq!(text.matches("ok ").count(), 5, "{text}");
}

#[test]
fn simulate_matches_the_reference_sequence() {
    let out = run(&[
        "simulate",
        "--cost",
        "300",
        "--types",
        "110,80,110",
        "--order",
        "1,2,3",
        "--strategy",
        "thm3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("social welfare: -10"), "{text}");

    // A balanced order zeroes every tax.
    let out = run(&[
        "simulate",
        "--types",
        "110,80,110",
        "--order",
        "1,3,2",
        "--strategy",
        "thm3",
        "--format",
        "json",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["outcome"]["taxes"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(json["outcome"]["social_welfare"], serde_json::json!("0"));

    let out = run(&[
        "simulate",
        "--types",
        "0,0,0",
        "--strategy",
        "truth",
        "--format",
        "json",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["outcome"]["decision"], serde_json::json!(0));
    assert_eq!(json["outcome"]["social_welfare"], serde_json::json!("0"));
}

#[test]
fn simulate_accepts_decimal_and_fraction_types() {
    let out = run(&[
        "simulate",
        "--cost",
        "1",
        "--types",
        "0.5,1/4",
        "--strategy",
        "truth",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["true_types"], serde_json::json!(["1/2", "1/4"]));
}

#[test]
fn sweep_reports_budget_balanced_orders() {
    let out = run(&[
        "sweep",
        "--types",
        "110,80,110",
        "--strategy",
        "thm3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 7, "header plus six permutations: {text}");
    // Exactly the two orders ending in player 2 balance the budget.
    let balanced: Vec<&str> = lines[1..]
        .iter()
        .filter(|l| l.ends_with("true"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(balanced, vec!["1;3;2", "3;1;2"]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--types",
        "60,70,250",
        "--strategy",
        "thm5",
        "--format",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);

    let json: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 6);
}

#[test]
fn verify_exit_codes_follow_the_contract() {
    // All-hold: exit 0.
    let out = run(&["verify", "optimal", "--strategy", "thm3", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // A failing property: exit 1, with a witness in the output.
    let out = run(&["verify", "social", "--strategy", "thm3", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"), "{text}");
    assert!(text.contains("socially_optimal[thm3,player=3]"), "{text}");

    // Configuration errors: exit 2.
    let out = run(&["verify", "optimal", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "nonsense", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--types", "110,80,301"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", "--types", "1,1,1,1,1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_report_round_trips() {
    let out = run(&[
        "verify", "ic", "--scheme", "zerotax", "--steps", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["all_hold"], serde_json::json!(false));
    let verdicts = json["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert!(verdicts[0]["witness"]["profile"].is_array());
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join("seqpivot-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.json");
    let path_str = path.to_str().unwrap();
    let out = run(&[
        "simulate",
        "--types",
        "60,70,250",
        "--strategy",
        "thm5",
        "--format",
        "json",
        "--out",
        path_str,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(json["outcome"]["social_welfare"], serde_json::json!("10"));
    std::fs::remove_file(&path).ok();
}
