//! End-to-end tests driving the `qtops` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qtops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtops"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qtops_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtops"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../qtops/tests/fixtures")
        .join(format!("{name}.txt"));
    path.to_str().unwrap().to_string()
}

#[test]
fn count_single_value() {
    let out = qtops(&["count", "q", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "14\n");
}

#[test]
fn count_is_byte_identical_across_methods() {
    let runs: Vec<String> = ["closed", "recurrence", "series", "brute"]
        .iter()
        .map(|m| {
            let out = qtops(&["count", "q", "--n", "4", "--method", m]);
            assert!(out.status.success(), "method {m}: {}", stderr(&out));
            stdout(&out)
        })
        .collect();
    assert!(runs.iter().all(|r| r == "58\n"), "{runs:?}");
}

#[test]
fn count_prefix_is_csv() {
    let out = qtops(&["count", "u", "--n", "4", "--prefix"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,value\n0,0\n1,1\n2,3\n3,7\n4,15\n");
}

#[test]
fn count_json_carries_schema_and_oeis() {
    let out = qtops(&["count", "v_a", "--n", "5", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema"], 1);
    assert_eq!(value["oeis"], "A296954");
    assert_eq!(value["value"], "44");
}

#[test]
fn degrees_prints_the_sequence() {
    let out = qtops(&["degrees", &fixture("bisym_preserving")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "(1, 1, 4, 6)\n");
}

#[test]
fn classify_prints_decomposition_and_shape() {
    let out = qtops(&["classify", &fixture("assoc_not_bisym")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("weak_order = 2 < 1~3; choice = {1~3: p1}"), "{text}");
    assert!(text.contains("shape: absent"), "{text}");

    let out = qtops(&["classify", &fixture("idempotent")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("not associative-quasitrivial"));
}

#[test]
fn build_emits_the_op_table_file() {
    let out = qtops(&["build", "--weak-order", "2 < 1~3", "--choice", "p1"]);
    assert!(out.status.success());
    let expected = std::fs::read_to_string(fixture("assoc_not_bisym")).unwrap();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn build_then_classify_round_trips_the_weak_order() {
    let built = qtops(&["build", "--weak-order", "2~3 < 1 < 4", "--choice", "p2"]);
    assert!(built.status.success());
    let dir = std::env::temp_dir().join("qtops-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("built.txt");
    std::fs::write(&path, stdout(&built)).unwrap();

    let out = qtops(&["classify", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("weak_order = 2~3 < 1 < 4; choice = {2~3: p2}"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn build_rejects_bad_choices() {
    let out = qtops(&["build", "--weak-order", "2~3 < 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("projection choice"));
}

#[test]
fn render_matches_the_contour_orientation() {
    let out = qtops(&["render", &fixture("idempotent")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3 | 1 2 3\n2 | 1 2 3\n1 | 1 3 3\n  +------\n    1 2 3\n");
}

#[test]
fn check_json_reports_properties() {
    let out = qtops(&["check", &fixture("bisym_preserving"), "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema"], 1);
    let report = &value["report"];
    assert_eq!(report["bisymmetric"], true);
    assert_eq!(report["order_preserving"], true);
    assert_eq!(report["annihilator"], 4);
    assert_eq!(report["degree_sequence"], serde_json::json!([1, 1, 4, 6]));
}

#[test]
fn check_respects_an_explicit_base() {
    // reversing the base flips order-preservation of the projections' mix
    let out = qtops(&["check", &fixture("bisym_preserving"), "--base", "4,3,2,1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("base: 4,3,2,1"));

    let out = qtops(&["check", &fixture("bisym_preserving"), "--base", "2,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_streams_and_counts() {
    let out = qtops(&["enumerate", "--n", "3", "--class", "bisymmetric,quasitrivial", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "14\n");

    let stream = qtops(&["enumerate", "--n", "2", "--class", "quasitrivial"]);
    assert!(stream.status.success());
    let text = stdout(&stream);
    let chunks: Vec<&str> = text.trim_end().split("\n\n").collect();
    assert_eq!(chunks.len(), 4, "{text}");
    for chunk in &chunks {
        assert!(chunk.starts_with("2\n"), "{chunk}");
    }
    let again = qtops(&["enumerate", "--n", "2", "--class", "quasitrivial"]);
    assert_eq!(stdout(&again), text);

    let bad = qtops(&["enumerate", "--n", "3", "--class", "sparkly"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_reports_and_exits_clean() {
    let out = qtops(&["verify", "--theorem", "THM_B", "--max-n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // quasitrivial universes of sizes 1, 4, 64 over n = 1..=3
    assert!(text.contains("instances: 69"), "{text}");
    assert!(text.contains("counterexamples: 0"), "{text}");

    let json = qtops(&["verify", "--theorem", "LEVELSET", "--max-n", "3", "--json"]);
    assert!(json.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(value["report"]["counterexamples"], serde_json::json!([]));

    let bad = qtops(&["verify", "--theorem", "NOPE", "--max-n", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = std::env::temp_dir().join("qtops-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("malformed.txt");
    std::fs::write(&path, "3\n1 1 1\n3 9 2\n3 3 3\n").unwrap();
    let out = qtops(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3, column 3"), "{}", stderr(&out));
}

#[test]
fn brute_force_limit_is_env_tunable() {
    let out = qtops(&["count", "p", "--n", "4", "--method", "brute"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "41\n");

    // lowering the bound makes the same call an input error
    let out = qtops_env(&["count", "p", "--n", "4", "--method", "brute"], "QTOPS_MAX_BRUTE_N", "3");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("limit 3"));
}
