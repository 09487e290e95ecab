use std::path::Path;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn lite_repair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lite-repair"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn assert_fails(out: &Output, code: i32, tag: &str) {
    assert_eq!(out.status.code(), Some(code));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with(&format!("error[{tag}]: ")), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn check_lists_global_conflicts() {
    let out = lite_repair(&["check", "--kb", &fixture("ex.dlkb")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.ends_with(": OK")).count(), 5);
    assert!(text.contains("global: INCONSISTENT\n"));
    assert!(text.contains("  {A(a), B(a)}\n  {A(c), B(c)}\n  {A(e), E(e)}\n"));
}

#[test]
fn rank_of_the_supports() {
    let out = lite_repair(&["rank", "--kb", &fixture("ex.dlkb"), "--query", &fixture("ex.dlq")]);
    let text = stdout(&out);
    assert!(text.contains("rank: 2\n"));
    let checks: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("checks: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(checks <= 3);
}

#[test]
fn nd_after_query_answers() {
    let out = lite_repair(&[
        "repair", "--kb", &fixture("ex.dlkb"), "--query", &fixture("ex.dlq"),
        "--strategy", "nd", "--pipeline", "after",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("repair:\n  A(a)\n  A(b)\n  A(c)\n  E(e)\n"));
    assert!(text.contains("answers:\n  (a)\n  (b)\n  (c)\n  (e)\nraw_answers:"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rank.txt");
    let out = lite_repair(&[
        "rank", "--kb", &fixture("ex.dlkb"), "--query", &fixture("ex.dlq"),
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("rank: 2\n"));
}

#[test]
fn generate_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.dlkb");
    let out = lite_repair(&[
        "generate", "--assertions", "20", "--strata", "3", "--conflicts", "5", "--seed", "1",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let check = lite_repair(&["check", "--kb", path.to_str().unwrap()]);
    assert!(check.status.success());
    let text = stdout(&check);
    let conflicts = text.lines().skip_while(|l| *l != "conflicts:").skip(1).count();
    assert_eq!(conflicts, 5);
}

#[test]
fn inconsistent_stratum_exits_one() {
    let out = lite_repair(&["check", "--kb", &fixture("bad_stratum.dlkb")]);
    assert_fails(&out, 1, "kb");
    assert!(String::from_utf8_lossy(&out.stderr).contains("{A(a), B(a)}"));
}

#[test]
fn infeasible_generation_exits_one() {
    let out = lite_repair(&["generate", "--assertions", "10", "--strata", "1", "--conflicts", "3"]);
    assert_fails(&out, 1, "gen");
}

#[test]
fn syntax_error_exits_two() {
    let out = lite_repair(&["check", "--kb", &fixture("syntax.dlkb")]);
    assert_fails(&out, 2, "parse");
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4, column 6"));
}

#[test]
fn missing_file_exits_two() {
    let out = lite_repair(&["check", "--kb", &fixture("missing.dlkb")]);
    assert_fails(&out, 2, "io");
}

#[test]
fn unbound_head_variable_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("bad.dlq");
    std::fs::write(&q, "q(?y) :- R(?x, z)\n").unwrap();
    let out = lite_repair(&["repair", "--kb", &fixture("ex.dlkb"), "--query", q.to_str().unwrap()]);
    assert_fails(&out, 2, "query");
}

#[test]
fn usage_errors_exit_two() {
    let out = lite_repair(&["repair", "--kb", &fixture("ex.dlkb")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = lite_repair(&["bench", "--repetitions", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}
