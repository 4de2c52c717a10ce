use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relator-forge"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("RELATOR_FORGE_MAX_DEGREE")
        .output()
        .unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn certify_power_conjugator_matches_golden() {
    let o = run(&["certify", "--family", "a,b^2,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("certify_a_b2_1_2.txt"));
}

#[test]
fn certify_conjugate_conjugator_matches_golden() {
    let o = run(&["certify", "--family", "a,b^-1 a b,1,2", "--stages", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("certify_a_conj_1_2.txt"));
}

#[test]
fn open_case_is_unknown() {
    let o = run(&["certify", "<a,b | (a^1)^(a^(b^-1 a b^2)) = a^2>"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "UNKNOWN: no certificate rule applies\n");
    assert!(o.stderr.is_empty());
}

#[test]
fn obstruct_baumslag_group() {
    let o = run(&["obstruct", "--family", "a,b,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("obstruct_a_b_1_2.txt"));
}

#[test]
fn file_and_inline_agree() {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/baumslag.rel");
    let from_file = run(&["analyze", "--file", file.to_str().unwrap()]);
    let inline = run(&["analyze", "<a,b | a = [a, a^b]>"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&inline));
    assert!(stdout(&inline).contains("recognized: G(a, b; 1, 2) (up to cyclic permutation and inversion)"));
}

#[test]
fn exactly_one_target() {
    let o = run(&["analyze", "<a,b | a>", "--family", "a,b,1,2"]);
    assert_ne!(o.status.code(), Some(0));
    let o = run(&["analyze"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_one() {
    let o = run(&["analyze", "<a,b | a^b = b^a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 17"));
}

#[test]
fn degree_cap_from_environment() {
    let capped = bin()
        .args(["quotients", "<a,b | a>", "--degree", "3"])
        .env("RELATOR_FORGE_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    let bad = bin()
        .args(["quotients", "<a,b | a>"])
        .env("RELATOR_FORGE_MAX_DEGREE", "nine")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let o = run(&[
        "quotients",
        "<a,b | a = [a, a^b]>",
        "--degree",
        "3",
        "--element",
        "a",
        "--list",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("solutions: 6\n"));
    assert!(out.contains("element a: trivial in all 6 solutions\n"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["quotients", "<a,b | [a,b]>", "--degree", "4", "--list"][..],
        &["certify", "--family", "a,b^-2 a b^2,2,3"][..],
        &["kernel", "--family", "a,b^3,2,-1", "--window", "3"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn lemmas_pass() {
    let o = run(&["lemmas"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}
