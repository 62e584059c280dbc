//! End-to-end CLI behavior: exit codes, output formats, determinism, and
//! schema round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qw1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qw1"))
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

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qw1-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn pure_state_json(amps: &[(f64, f64)]) -> String {
    let dim = amps.len();
    let mut data = Vec::new();
    for (ar, ai) in amps {
        for (br, bi) in amps {
            // (a)(b)* entries of the projector
            data.push([ar * br + ai * bi, ai * br - ar * bi]);
        }
    }
    serde_json::json!({"rows": dim, "cols": dim, "data": data}).to_string()
}

#[test]
fn unitary_distance_catalog_path() {
    let out = qw1(&["w1-unitary", "--u", "I", "--v", "CNOT"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1.414213562"), "{text}");
    assert!(text.contains("AnalyticCatalog"), "{text}");
}

#[test]
fn state_distance_and_verify() {
    let zero = temp_file("zero.json", &pure_state_json(&[(1.0, 0.0), (0.0, 0.0)]));
    let plus = temp_file(
        "plus.json",
        &pure_state_json(&[(std::f64::consts::FRAC_1_SQRT_2, 0.0), (std::f64::consts::FRAC_1_SQRT_2, 0.0)]),
    );
    // identical states cost nothing
    let out = qw1(&[
        "w1-state",
        "--rho",
        zero.to_str().unwrap(),
        "--sigma",
        zero.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.000000000"), "{}", stdout(&out));

    let out = qw1(&[
        "w1-state",
        "--rho",
        zero.to_str().unwrap(),
        "--sigma",
        plus.to_str().unwrap(),
        "--verify",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verify: ok"), "{}", stdout(&out));
}

#[test]
fn malformed_json_names_the_offending_input() {
    let bad = temp_file("bad.json", "{\"rows\": 2, \"cols\": 2}");
    let out = qw1(&[
        "w1-state",
        "--rho",
        bad.to_str().unwrap(),
        "--sigma",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("bad.json"), "error should name the file: {err}");
}

#[test]
fn missing_argument_exits_one() {
    let out = qw1(&["budget", "--t", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--alpha"), "{}", stderr(&out));
}

#[test]
fn non_convergence_exits_two_with_report() {
    // an impossible tolerance cannot converge within the iteration budget;
    // the certificate is still emitted, flagged converged: false
    let zero = temp_file("nc-zero.json", &pure_state_json(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]));
    let bell = temp_file(
        "nc-bell.json",
        &pure_state_json(&[
            (std::f64::consts::FRAC_1_SQRT_2, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ]),
    );
    let out = qw1(&[
        "w1-state",
        "--rho",
        zero.to_str().unwrap(),
        "--sigma",
        bell.to_str().unwrap(),
        "--tolerance",
        "1e-12",
        "--max-iterations",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("converged: false"), "{}", stdout(&out));
}

#[test]
fn budget_threshold_matches_worked_example() {
    let out = qw1(&["budget", "--alpha", "0.3", "--t", "5", "--povm", "example1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.12"), "{}", stdout(&out));
}

#[test]
fn error_rate_depolarizing() {
    let out = qw1(&["error-rate", "--u", "H", "--channel", "depolarizing:0.1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.05"), "{}", stdout(&out));
}

#[test]
fn json_output_is_deterministic_and_round_trips() {
    // numeric-ascent path with a fixed seed must be byte-identical
    let args = [
        "w1-unitary",
        "--u",
        "I ⊗ I",
        "--v",
        "(H ⊗ I) * SWAP * (H ⊗ I)",
        "--seed",
        "3",
        "--restarts",
        "6",
        "--format",
        "json",
    ];
    let a = qw1(&args);
    let b = qw1(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "same seed must give identical bytes");

    let parsed: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(parsed["value"].is_f64());
    assert_eq!(parsed["method"], "numeric-ascent");

    // certificate JSON re-parses under the documented schema
    let zero = temp_file("rt-zero.json", &pure_state_json(&[(1.0, 0.0), (0.0, 0.0)]));
    let one = temp_file("rt-one.json", &pure_state_json(&[(0.0, 0.0), (1.0, 0.0)]));
    let out = qw1(&[
        "w1-state",
        "--rho",
        zero.to_str().unwrap(),
        "--sigma",
        one.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let cert: qw1::json::CertificateJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((cert.value - 1.0).abs() < 1e-9);
}

#[test]
fn catalog_full_table_and_custom_error() {
    let out = qw1(&["catalog", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 8 + 24); // header + named + permutations
    assert!(text.contains("\"SWAP\",2"), "{text}");

    // a composite expression has no catalog entry
    let out = qw1(&["catalog", "--gate", "CNOT * SWAP"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("catalog"), "{}", stderr(&out));
}

#[test]
fn witness_subcommand() {
    let out = qw1(&[
        "witness",
        "--theta",
        "3.14159265358979",
        "--amplitudes",
        "0.5,0,0.7071067811865476,0.5",
        "--verify",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("1.414213562"), "{text}");
    assert!(text.contains("ok"), "{text}");

    let out = qw1(&["witness", "--theta", "1.0", "--amplitudes", "1,1,0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_emits_csv_rows() {
    let out = qw1(&[
        "w1-unitary",
        "--u",
        "I",
        "--v",
        "CP(theta=@,k=3)",
        "--sweep",
        "0.2:3.0:5",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6, "{text}");
    // each value is sqrt(2) sin(theta/2) via the catalog
    let last = text.lines().last().unwrap();
    assert!(last.contains("AnalyticCatalog"), "{text}");
}

#[test]
fn error_rate_json_round_trips() {
    let out = qw1(&[
        "error-rate",
        "--u",
        "CNOT",
        "--channel",
        "depolarizing:0.2",
        "--restarts",
        "4",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: qw1::json::ErrorRateJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((parsed.bracket_low - 0.075).abs() < 1e-12);
    assert!((parsed.bracket_high - 0.15).abs() < 1e-12);
}

#[test]
fn reproduce_paper_csv_smoke() {
    let out = qw1(&["reproduce-paper", "--restarts", "8", "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().count() > 80, "{} lines", text.lines().count());
    assert!(text.contains("flagged"), "discrepancy row missing");
    assert!(!text.contains(",FAIL"), "{text}");

    let out = qw1(&["reproduce-paper", "--restarts", "8", "--format", "json"]);
    assert!(out.status.success());
    let parsed: qw1::report::PaperReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed.passed);
}

#[test]
fn remaining_subcommands_emit_parseable_json() {
    let out = qw1(&["catalog", "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed.as_array().unwrap().len() > 30);

    let out = qw1(&[
        "budget", "--alpha", "0.3", "--t", "5", "--povm", "example1", "--theta", "0.1",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((parsed["threshold"].as_f64().unwrap() - 0.12).abs() < 1e-12);
    assert_eq!(parsed["admissible"], true);

    let out = qw1(&[
        "witness", "--theta", "1.0", "--amplitudes", "0.5,0.5,0.5,0.5", "--format", "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed["reconstruction_residual"].as_f64().unwrap() < 1e-9);
}
