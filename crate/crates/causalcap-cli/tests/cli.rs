//! End-to-end tests of the binary: exit codes, the CSV contract, the
//! certificate report, and SDPA export round-tripping.

use assert_cmd::Command;
use predicates::prelude::*;

fn causalcap() -> Command {
    Command::cargo_bin("causalcap").unwrap()
}

#[test]
fn certify_ad01_passes_and_reports_order() {
    causalcap()
        .args(["certify", "ad01"])
        .assert()
        .success()
        .stdout(predicate::str::contains("discovered subsystem order: X1, Y1, X2, Y2"))
        .stdout(predicate::str::contains("m* <= 5/2"))
        .stdout(predicate::str::contains("m* <= 39/20"))
        .stdout(predicate::str::contains("all exact verifications passed"));
}

#[test]
fn certify_missing_case_is_an_input_error() {
    causalcap()
        .args(["certify", "no-such-case"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("not found"));
}

#[test]
fn certify_tampered_data_is_a_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let src = causalcap::exact::certs::bundled_case_dir("ad01");
    for entry in std::fs::read_dir(&src).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let target = dir.path().join("dual_free_m.json");
    let text = std::fs::read_to_string(&target).unwrap();
    std::fs::write(&target, text.replace("3808/25", "3807/25")).unwrap();
    causalcap()
        .args(["certify", "ad01", "--data"])
        .arg(dir.path())
        .assert()
        .code(1)
        .stderr(predicate::str::contains("checksum"));
}

#[test]
fn trials_with_zero_runs_is_an_input_error() {
    causalcap()
        .args(["trials", "pauli", "--n", "0"])
        .assert()
        .code(2);
}

#[test]
fn sweep_writes_the_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    causalcap()
        .args([
            "sweep",
            "--eta-start",
            "0.1",
            "--eta-end",
            "0.1",
            "--steps",
            "1",
            "--classes",
            "freepar",
            "--eps",
            "0",
            "--out",
        ])
        .arg(&out)
        .assert()
        .success();
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eta,class,eps,m_star,capacity_bits,status,solve_ms"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 7);
    assert_eq!(row[0], "0.100000000");
    assert_eq!(row[1], "freepar");
    assert_eq!(row[5], "optimal");
    let m_star: f64 = row[3].parse().unwrap();
    assert!((m_star - 1.7552304).abs() < 1e-4, "m* = {m_star}");
}

#[test]
fn sweep_rejects_grid_outside_half() {
    let dir = tempfile::tempdir().unwrap();
    causalcap()
        .args(["sweep", "--eta-start", "0.2", "--eta-end", "0.7", "--out"])
        .arg(dir.path().join("x.csv"))
        .assert()
        .code(2);
}

#[test]
fn threshold_with_identical_classes_is_empty() {
    causalcap()
        .args(["threshold", "--classes", "free,free"])
        .assert()
        .success()
        .stdout(predicate::str::contains("empty interval"));
}

#[test]
fn export_sdpa_round_trips_through_the_parser() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("channels.json");
    std::fs::write(&spec, r#"[{"kind":"ad","eta":0.1}]"#).unwrap();
    let out = dir.path().join("problem.dat-s");
    causalcap()
        .args(["export-sdpa", "--class", "freepar", "--eps", "0", "--channels"])
        .arg(&spec)
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    let text = std::fs::read_to_string(&out).unwrap();
    let parsed = causalcap::sdp::sdpa::parse_sdpa(&text).unwrap();
    assert!(parsed.num_vars > 0);
    assert!(!parsed.entries.is_empty());
}

#[test]
fn bad_solver_tolerance_env_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    causalcap()
        .env("CAUSALCAP_SOLVER_TOL", "not-a-number")
        .args([
            "sweep",
            "--steps",
            "1",
            "--classes",
            "freepar",
            "--out",
        ])
        .arg(dir.path().join("x.csv"))
        .assert()
        .code(2)
        .stderr(predicate::str::contains("CAUSALCAP_SOLVER_TOL"));
}
