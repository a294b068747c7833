//! End-to-end tests of the binary: flags, outputs, exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn matsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Parses a two-line stats CSV (header + row) into its row fields.
fn csv_fields(text: &str) -> Vec<String> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("instance,scheme,nodes,failures,solutions,seconds"),
        "fixed header"
    );
    lines
        .next()
        .expect("one data row")
        .split(',')
        .map(str::to_string)
        .collect()
}

#[test]
fn unknown_scheme_is_a_usage_error() {
    let out = matsym(&[
        "solve",
        "--problem",
        "random",
        "--dims",
        "2x2",
        "--domain-size",
        "2",
        "--scheme",
        "foo",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown scheme"));
}

#[test]
fn scheme_none_enumerates_everything() {
    let out = matsym(&[
        "solve",
        "--problem",
        "random",
        "--dims",
        "2x2",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--scheme",
        "none",
        "--count",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let fields = csv_fields(&stdout(&out));
    assert_eq!(fields[1], "none");
    assert_eq!(fields[4], "16");
}

#[test]
fn solve_bibd_doublelex_counts_one() {
    let out = matsym(&[
        "solve",
        "--problem",
        "bibd",
        "--v",
        "7",
        "--b",
        "7",
        "--r",
        "3",
        "--k",
        "3",
        "--lambda",
        "1",
        "--scheme",
        "doublelex",
        "--count",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let fields = csv_fields(&stdout(&out));
    assert_eq!(fields[0], "bibd-v7-b7-r3-k3-l1");
    assert_eq!(fields[1], "doublelex");
    // pinned by the verified run: the Fano incidence matrix has a unique
    // doubly-lex-ordered labelling
    assert_eq!(fields[4], "1");
}

#[test]
fn solve_all_streams_solutions() {
    let out = matsym(&[
        "solve",
        "--problem",
        "random",
        "--dims",
        "1x2",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    // four solutions, then header, then stats row
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "[0,0]");
    assert_eq!(lines[3], "[1,1]");
}

#[test]
fn infeasible_model_exits_one() {
    let out = matsym(&[
        "solve",
        "--problem",
        "rack",
        "--rack",
        "1:10:2",
        "--card",
        "1:5",
        "--count",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_3x2_doublelex_reports_incomplete() {
    let out = matsym(&[
        "verify",
        "--problem",
        "random",
        "--dims",
        "3x2",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--scheme",
        "doublelex",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["sound"], true);
    assert_eq!(report["complete"], false);
    assert_eq!(report["orbit_count"], 13);
    assert_eq!(report["survivor_count"], 14);
    assert!(!report["witness_pairs"].as_array().unwrap().is_empty());
}

#[test]
fn verify_2x2_lexleader_reports_complete() {
    let out = matsym(&[
        "verify",
        "--problem",
        "random",
        "--dims",
        "2x2",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--scheme",
        "lexleader",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["sound"], true);
    assert_eq!(report["complete"], true);
    assert_eq!(report["survivor_count"], 7);
}

#[test]
fn verify_large_group_is_a_budget_error() {
    let out = matsym(&[
        "verify",
        "--problem",
        "bibd",
        "--v",
        "7",
        "--b",
        "7",
        "--r",
        "3",
        "--k",
        "3",
        "--lambda",
        "1",
        "--scheme",
        "lexleader",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("25401600"));
}

#[test]
fn compare_emits_one_row_per_scheme() {
    let out = matsym(&[
        "compare",
        "--problem",
        "random",
        "--dims",
        "3x2",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--schemes",
        "none,doublelex,doublelex+allperm,lexleader",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    let counts: Vec<u64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts[0], 64);
    // added constraints only remove solutions
    assert!(counts.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(counts[3], 13); // lex-leader leaves one per orbit
}

#[test]
fn multiset_rows_composes_with_doublelex() {
    // the combination is permitted; its soundness is reported per
    // instance, not assumed
    let out = matsym(&[
        "verify",
        "--problem",
        "random",
        "--dims",
        "3x2",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--scheme",
        "multiset-rows+doublelex",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["scheme"], "multiset-rows+doublelex");
    assert!(report["sound"].is_boolean());
}

#[test]
fn compare_handles_independent_schemes() {
    // two rows, no ordering asserted between them
    let out = matsym(&[
        "compare",
        "--problem",
        "random",
        "--dims",
        "2x3",
        "--domain-size",
        "2",
        "--density",
        "0",
        "--schemes",
        "doublelex,snakelex",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn sweep_finds_doublelex_witness_at_2x3() {
    let out = matsym(&["sweep", "--scheme", "doublelex", "--max-cells", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["found"], true);
    assert_eq!(report["witness"]["dims"], serde_json::json!([2, 3]));
}

#[test]
fn sweep_lexleader_finds_nothing() {
    let out = matsym(&["sweep", "--scheme", "lexleader", "--max-cells", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["found"], false);
}

#[test]
fn sweep_row_sum_witness_within_4_cells() {
    let out = matsym(&["sweep", "--scheme", "row-sum", "--max-cells", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["found"], true);
    assert_eq!(report["witness"]["dims"], serde_json::json!([2, 2]));
}

#[test]
fn problem_json_round_trips_through_a_file() {
    let path: PathBuf =
        std::env::temp_dir().join(format!("matsym-test-{}.json", std::process::id()));
    let out = matsym(&[
        "problem",
        "bibd",
        "--v",
        "3",
        "--b",
        "3",
        "--r",
        "2",
        "--k",
        "2",
        "--lambda",
        "1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let direct = matsym(&[
        "solve",
        "--problem",
        "bibd",
        "--v",
        "3",
        "--b",
        "3",
        "--r",
        "2",
        "--k",
        "2",
        "--lambda",
        "1",
        "--count",
    ]);
    let from_file = matsym(&["solve", "--model", path.to_str().unwrap(), "--count"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(from_file.status.code(), Some(0));
    let a = csv_fields(&stdout(&direct));
    let b = csv_fields(&stdout(&from_file));
    // identical search, identical counts
    assert_eq!(a[2..5], b[2..5]);
    assert_eq!(a[4], "6");
}

#[test]
fn time_limit_exits_with_the_budget_code() {
    // 3^16 assignments cannot be enumerated in 50ms
    let out = matsym(&[
        "solve",
        "--problem",
        "random",
        "--dims",
        "4x4",
        "--domain-size",
        "3",
        "--density",
        "0",
        "--count",
        "--time-limit",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("limit exceeded"));
}

#[test]
fn bad_model_file_is_a_usage_error() {
    let path: PathBuf =
        std::env::temp_dir().join(format!("matsym-bad-{}.json", std::process::id()));
    std::fs::write(&path, "{not json").unwrap();
    let out = matsym(&["solve", "--model", path.to_str().unwrap(), "--count"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stats_rows_are_byte_identical_without_timing() {
    let args = [
        "solve",
        "--problem",
        "bibd",
        "--v",
        "7",
        "--b",
        "7",
        "--r",
        "3",
        "--k",
        "3",
        "--lambda",
        "1",
        "--scheme",
        "doublelex+allperm",
        "--count",
    ];
    let strip_seconds = |text: &str| -> String {
        text.lines()
            .map(|l| {
                l.rsplit_once(',')
                    .map(|(head, _)| head.to_string())
                    .unwrap()
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip_seconds(&stdout(&matsym(&args)));
    let b = strip_seconds(&stdout(&matsym(&args)));
    assert_eq!(a, b);
    assert!(!a.is_empty());
}
