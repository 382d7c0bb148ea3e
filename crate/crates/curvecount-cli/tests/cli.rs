use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvecount")).args(args).env_remove("CURVECOUNT_CATALOG").output().unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curvecount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn count_matches_golden() {
    let o = run(&["count", "--q", "3", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("count_sextic_q3_b2.csv"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not verifiable"));
}

#[test]
fn cones_matches_golden() {
    let o = run(&["cones"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("cones_sextic.csv"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let one = run(&["count", "--q", "2", "--bound", "4", "--jobs", "1"]);
    let two = run(&["count", "--q", "2", "--bound", "4", "--jobs", "2"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&two));
}

#[test]
fn degree_zero_has_two_morphisms() {
    let o = run(&["count", "--q", "3", "--bound", "0"]);
    let out = stdout(&o);
    let records: Vec<&str> = out.lines().filter(|l| l.starts_with("record")).collect();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].split(',').nth(4), Some("2"));
}

#[test]
fn oracle_agrees() {
    let o = run(&["count", "--q", "2", "--bound", "3", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exhausted_budget_exits_three_with_partial_output() {
    let o = run(&["count", "--q", "3", "--bound", "4", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).lines().count() >= 2);
}

#[test]
fn composite_q_is_rejected() {
    assert_eq!(run(&["gamma", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--q", "6"]).status.code(), Some(2));
}

#[test]
fn malformed_surface_is_rejected() {
    let p = scratch("broken.toml");
    std::fs::write(&p, "name = \"broken\"\npicard_rank = \"four\"\n").unwrap();
    assert_eq!(run(&["validate", "--surface", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["validate", "--surface", "no_such_surface"]).status.code(), Some(2));
}

#[test]
fn validate_reports_invariants() {
    let o = run(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["anticanonical: 3 -1 -1 -1", "alpha: 1/144", "face_hypothesis: true", "delta: 1"] {
        assert!(out.contains(line), "{line}");
    }
}

#[test]
fn catalog_directory_is_searched() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../curvecount/catalog");
    let name = std::fs::read_dir(&dir).unwrap().next().unwrap().unwrap().path();
    let stem = name.file_stem().unwrap().to_str().unwrap().to_string();
    let o = run(&["validate", "--catalog", dir.to_str().unwrap(), "--surface", &stem]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gamma_summary() {
    let o = run(&["gamma", "--q", "2", "--bound", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("prefactor: 6.400000000e1"));
}

#[test]
fn certify_catches_a_perturbed_closed_form() {
    let clean = run(&["certify", "--skip-grid"]);
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
    let bad = run(&["certify", "--skip-grid", "--perturb"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("h1-closed-form g=000,fail"));
}

#[test]
fn certify_rejects_a_cap_below_the_support() {
    assert_eq!(run(&["certify", "--skip-grid", "--cap", "1"]).status.code(), Some(2));
}

#[test]
fn lambda_grid_accepts_decimals_and_fractions() {
    let o = run(&["cones", "--lambda-grid", "0,0.25,1/2", "--j0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sextic-a1,1/4,1/144,127/21168,127/147"));
    assert_eq!(run(&["cones", "--lambda-grid", "x"]).status.code(), Some(2));
}
