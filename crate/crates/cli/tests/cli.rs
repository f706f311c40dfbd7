//! End-to-end tests driving the `gme` binary and checking its stdout,
//! produced files, and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use gme_core::state::{ghz, w, write_state_file};
use gme_core::witness::{write_witness_file, Witness};

fn gme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gme"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr should be UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process should exit normally")
}

/// Per-test scratch directory under the system temp dir.
fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("gme-cli-tests").join(test);
    fs::create_dir_all(&dir).expect("scratch dir should be creatable");
    dir
}

/// A fixed generic three-qubit state with no special structure; the solver
/// needs several sweeps on it, which makes it useful for exercising the
/// non-convergence path.
fn write_generic_state(path: &PathBuf) {
    let doc = serde_json::json!({
        "dims": [2, 2, 2],
        "amplitudes": [
            { "index": [0, 0, 0], "re": 0.31, "im": 0.12 },
            { "index": [0, 0, 1], "re": -0.22, "im": 0.41 },
            { "index": [0, 1, 0], "re": 0.05, "im": -0.33 },
            { "index": [0, 1, 1], "re": 0.44, "im": 0.02 },
            { "index": [1, 0, 0], "re": -0.17, "im": 0.28 },
            { "index": [1, 0, 1], "re": 0.09, "im": -0.14 },
            { "index": [1, 1, 0], "re": 0.36, "im": 0.21 },
            { "index": [1, 1, 1], "re": -0.25, "im": 0.07 }
        ]
    });
    fs::write(path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
}

#[test]
fn compute_reports_reference_values() {
    let cases = [
        ("ghz:3", "lambda2_max: 0.500000000000", "e_sin2: 0.500000000000"),
        ("w:3", "lambda2_max: 0.444444444444", "e_sin2: 0.555555555556"),
        ("dicke:3:2", "lambda2_max: 0.444444444444", "e_sin2: 0.555555555556"),
        ("dicke:4:2", "lambda2_max: 0.375000000000", "e_sin2: 0.625000000000"),
        ("bell", "lambda2_max: 0.500000000000", "e_sin2: 0.500000000000"),
    ];
    for (state, lambda2_line, e_line) in cases {
        let output = gme(&["compute", "--state", state]);
        assert_eq!(code(&output), 0, "{state} should compute cleanly");
        let text = stdout(&output);
        assert!(text.contains(lambda2_line), "{state} output:\n{text}");
        assert!(text.contains(e_line), "{state} output:\n{text}");
        assert!(text.contains("converged: true"), "{state} output:\n{text}");
    }
}

#[test]
fn compute_is_byte_identical_across_runs() {
    let args = ["compute", "--state", "dicke:4:2", "--seed", "99"];
    let first = gme(&args);
    let second = gme(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "same seed should give same bytes");
}

#[test]
fn compute_accepts_state_files() {
    let path = scratch("state-file").join("ghz3.json");
    write_state_file(&path, &ghz(3).unwrap()).unwrap();

    let from_file = gme(&["compute", "--state", path.to_str().unwrap()]);
    let from_builtin = gme(&["compute", "--state", "ghz:3"]);
    assert_eq!(code(&from_file), 0);

    let value = |output: &Output| {
        stdout(output)
            .lines()
            .find(|line| line.starts_with("lambda2_max:"))
            .expect("lambda2_max line present")
            .to_string()
    };
    assert_eq!(value(&from_file), value(&from_builtin));
}

#[test]
fn compute_flags_non_convergence_with_exit_2() {
    let path = scratch("non-convergence").join("generic.json");
    write_generic_state(&path);

    let output = gme(&["compute", "--state", path.to_str().unwrap(), "--max-iters", "1"]);
    assert_eq!(code(&output), 2);
    let text = stdout(&output);
    assert!(text.contains("converged: false"), "output:\n{text}");
    assert!(text.contains("lambda_max:"), "values must still be printed:\n{text}");
}

#[test]
fn witness_rejects_parameters_outside_the_window() {
    let below = gme(&["witness", "--state", "w:3", "--lambda2", "0.3"]);
    assert_eq!(code(&below), 3);
    assert!(stderr(&below).contains("condition (i)"), "stderr:\n{}", stderr(&below));

    let above = gme(&["witness", "--state", "w:3", "--lambda2", "1.0"]);
    assert_eq!(code(&above), 3);
    assert!(stderr(&above).contains("condition (ii)"), "stderr:\n{}", stderr(&above));
}

#[test]
fn witness_file_round_trips_through_verify() {
    let path = scratch("witness-round-trip").join("w3.json");
    let built = gme(&["witness", "--state", "w:3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&built), 0);
    let text = stdout(&built);
    assert!(text.contains("window: [0.444444444444, 1)"), "output:\n{text}");
    assert!(text.contains("detector on state: -0.555555555556"), "output:\n{text}");

    let verified = gme(&[
        "verify",
        "--witness",
        path.to_str().unwrap(),
        "--state",
        "w:3",
        "--samples",
        "2000",
    ]);
    assert_eq!(code(&verified), 0, "stderr:\n{}", stderr(&verified));
    assert!(stdout(&verified).contains("verdict: consistent"));
}

#[test]
fn verify_flags_a_non_witness_with_exit_4() {
    // lambda2 = 0.3 sits below the W state window, so some product states
    // must see a negative detector.
    let path = scratch("pseudo-witness").join("bad.json");
    let pseudo = Witness::structured(w(3).unwrap(), 0.3).unwrap();
    write_witness_file(&path, &pseudo).unwrap();

    let output = gme(&[
        "verify",
        "--witness",
        path.to_str().unwrap(),
        "--state",
        "w:3",
        "--samples",
        "2000",
    ]);
    assert_eq!(code(&output), 4);
    assert!(stdout(&output).contains("verdict: violates condition (i)"));
}

#[test]
fn verify_flags_an_undetected_target_with_exit_5() {
    let path = scratch("undetected-target").join("w3.json");
    let built = gme(&["witness", "--state", "w:3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&built), 0);

    let output = gme(&[
        "verify",
        "--witness",
        path.to_str().unwrap(),
        "--state",
        "maxmixed:3",
        "--samples",
        "500",
    ]);
    assert_eq!(code(&output), 5);
    let text = stdout(&output);
    assert!(text.contains("verdict: fails condition (ii)"), "output:\n{text}");
    assert!(text.contains("target detector: 0.319444444444"), "output:\n{text}");
}

#[test]
fn scan_writes_the_corner_grid_exactly() {
    let path = scratch("scan-corners").join("grid.csv");
    let output = gme(&["scan", "--nx", "2", "--ny", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&output), 0);
    assert!(
        stdout(&output).contains("min=-0.555555555556 at x=0.000000000000 y=0.000000000000"),
        "output:\n{}",
        stdout(&output)
    );

    let expected = "x,y,detector\n\
                    0.000000000000e+00,0.000000000000e+00,-5.555555555556e-01\n\
                    0.000000000000e+00,1.000000000000e+00,4.444444444444e-01\n\
                    1.000000000000e+00,0.000000000000e+00,4.444444444444e-01\n\
                    1.000000000000e+00,1.000000000000e+00,-5.555555555556e-01\n";
    assert_eq!(fs::read_to_string(&path).unwrap(), expected);
}

#[test]
fn scan_rejects_degenerate_grids() {
    let path = scratch("scan-degenerate").join("grid.csv");
    let output = gme(&["scan", "--nx", "1", "--ny", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
    assert!(stderr(&output).contains("grid"), "stderr:\n{}", stderr(&output));
}

#[test]
fn manifest_records_parameters_and_results() {
    let path = scratch("manifest").join("run.json");
    let output = gme(&[
        "compute",
        "--state",
        "w:3",
        "--manifest",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "compute");
    assert_eq!(manifest["seed"], 1729);
    assert_eq!(manifest["parameters"]["state"], "w:3");
    assert!(!manifest["tool_version"].as_str().unwrap().is_empty());
    let lambda2 = manifest["results"]["lambda2_max"].as_f64().unwrap();
    assert!((lambda2 - 4.0 / 9.0).abs() < 1e-9, "lambda2_max = {lambda2}");
}

#[test]
fn malformed_inputs_exit_1() {
    let cases: &[&[&str]] = &[
        &["compute", "--state", "dicke:3"],
        &["compute", "--state", "ghz:abc"],
        &["compute", "--state", "no-such-file.json"],
        &["compute"],
        &["no-such-command"],
    ];
    for args in cases {
        let output = gme(args);
        assert_eq!(code(&output), 1, "args {args:?} should exit 1");
        assert!(!stderr(&output).is_empty(), "args {args:?} should explain");
    }
}

#[test]
fn help_and_version_exit_0() {
    for args in [&["--help"][..], &["--version"][..], &["compute", "--help"][..]] {
        let output = gme(args);
        assert_eq!(code(&output), 0, "args {args:?}");
        assert!(!stdout(&output).is_empty());
    }
}
