use std::path::Path;
use std::process::Command;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_lite-repair"))
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("elapsed_ms:"))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn check_report() {
    assert_eq!(run(&["check", "--kb", &fixture("ex.dlkb")]), golden("check.txt"));
}

#[test]
fn rank_report() {
    let got = run(&["rank", "--kb", &fixture("ex.dlkb"), "--query", &fixture("ex.dlq")]);
    assert_eq!(got, golden("rank.txt"));
}

#[test]
fn conflicts_and_free_reports() {
    let kb = fixture("ex.dlkb");
    let q = fixture("ex.dlq");
    assert_eq!(run(&["conflicts", "--kb", &kb, "--query", &q]), golden("conflicts.txt"));
    assert_eq!(run(&["free", "--kb", &kb]), golden("free.txt"));
}

#[test]
fn query_report() {
    let got = run(&["query", "--kb", &fixture("ex.dlkb"), "--query", &fixture("ex.dlq")]);
    assert_eq!(got, golden("query.txt"));
}

#[test]
fn repair_reports() {
    let kb = fixture("ex.dlkb");
    let q = fixture("ex.dlq");
    assert_eq!(run(&["repair", "--kb", &kb, "--query", &q]), golden("repair_all.txt"));
    assert_eq!(
        run(&["repair", "--kb", &kb, "--query", &q, "--pipeline", "before"]),
        golden("repair_before.txt")
    );
}

#[test]
fn reports_are_deterministic() {
    let args = ["repair", "--kb", &fixture("ex.dlkb"), "--query", &fixture("ex.dlq"), "--strategy", "nd"];
    assert_eq!(run(&args), run(&args));
}
