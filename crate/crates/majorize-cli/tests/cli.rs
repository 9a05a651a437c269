//! End-to-end tests of the binary: exit codes, report contents, round
//! trips, and the grid-refinement inclusion property of scans.

use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "majorize-cli-test-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_problem(dir: &PathBuf, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majorize"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report_from(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "expected success, got {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

const IDENTICAL_DICHOTOMY: &str = r#"{
    "d": 2,
    "p": [[0.5, 0.3, 0.2], [0.25, 0.5, 0.25]],
    "q": [[0.5, 0.3, 0.2], [0.25, 0.5, 0.25]]
}"#;

#[test]
fn oneshot_on_equal_tuples_serializes_the_identity() {
    let dir = scratch_dir();
    let path = write_problem(&dir, "same.json", IDENTICAL_DICHOTOMY);
    let out = run(&["check", path.to_str().unwrap(), "--mode", "oneshot"]);
    let report = report_from(&out);
    assert_eq!(report["command"], "check");
    assert_eq!(report["mode"], "oneshot");
    assert_eq!(report["body"]["kind"], "feasibility");
    assert_eq!(report["body"]["feasible"], true);
    let t = &report["body"]["transition"];
    assert_eq!(t["rows"], 3);
    assert_eq!(t["cols"], 3);
    let data: Vec<f64> =
        serde_json::from_value(t["data"].clone()).expect("row-major transition data");
    assert_eq!(data, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn jensen_point_mass_is_strict() {
    let dir = scratch_dir();
    let path = write_problem(
        &dir,
        "jensen.json",
        r#"{"d": 1, "p": [[1.0, 0.0]], "q": [[0.5, 0.5]]}"#,
    );
    let out = run(&["check", path.to_str().unwrap(), "--mode", "jensen"]);
    let report = report_from(&out);
    assert_eq!(report["body"]["verdict"], "StrictlySatisfied");
    assert_eq!(report["config"]["resolution"], 16);
}

#[test]
fn exact_mode_handles_fractions_losslessly() {
    let dir = scratch_dir();
    // thirds cannot be represented in binary; exact mode must still see the
    // mass match and find the identity
    let path = write_problem(
        &dir,
        "thirds.json",
        r#"{
            "d": 2,
            "p": [["1/3", "2/3"], ["2/3", "1/3"]],
            "q": [["1/3", "2/3"], ["2/3", "1/3"]]
        }"#,
    );
    let out = run(&["check", path.to_str().unwrap(), "--mode", "oneshot", "--exact"]);
    let report = report_from(&out);
    assert_eq!(report["body"]["feasible"], true);
    assert_eq!(report["body"]["residual"], 0.0);
    assert_eq!(report["config"]["exact"], true);

    // a mass mismatch invisible at 1e-9 float tolerance is still refuted
    let path = write_problem(
        &dir,
        "mismatch.json",
        r#"{
            "d": 1,
            "p": [["1/3", "2/3"]],
            "q": [["1/3", "666666666666/1000000000000"]]
        }"#,
    );
    let out = run(&["check", path.to_str().unwrap(), "--mode", "oneshot", "--exact"]);
    let report = report_from(&out);
    assert_eq!(report["body"]["feasible"], false);
}

#[test]
fn witness_on_equal_tuples_finds_order_one() {
    let dir = scratch_dir();
    let path = write_problem(&dir, "same.json", IDENTICAL_DICHOTOMY);
    let out_path = dir.join("witness.json");
    let out = run(&[
        "witness",
        path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["body"]["outcome"], "found");
    assert_eq!(report["body"]["order"], 1);
    assert_eq!(report["body"]["catalyst_verified"], true);
}

#[test]
fn vector_witness_reports_bistochastic_transition_and_catalyst() {
    let dir = scratch_dir();
    let path = write_problem(
        &dir,
        "vector.json",
        r#"{
            "d": 1,
            "p": [[0.55, 0.30, 0.15]],
            "q": [[0.5, 0.352, 0.09, 0.058]],
            "options": {"n_max": 6}
        }"#,
    );
    let out = run(&["witness", path.to_str().unwrap()]);
    let report = report_from(&out);
    assert_eq!(report["body"]["outcome"], "found");
    assert_eq!(report["body"]["order"], 3);
    assert_eq!(report["body"]["catalyst_verified"], true);
    let residual = report["body"]["transition_residual"].as_f64().unwrap();
    assert!(residual <= 1e-8);
    // catalyst column lengths follow the mixed-word construction
    let catalyst: Vec<Vec<f64>> =
        serde_json::from_value(report["body"]["catalyst_columns"].clone()).unwrap();
    assert_eq!(catalyst.len(), 1);
    assert_eq!(catalyst[0].len(), 9 + 12 + 16);
}

#[test]
fn approximate_witness_round_trips_through_the_report_file() {
    let dir = scratch_dir();
    let path = write_problem(
        &dir,
        "approx.json",
        r#"{
            "d": 2,
            "p": [[0.625, 0.3125, 0.0625], [0.4375, 0.125, 0.4375]],
            "q": [[0.5625, 0.125, 0.3125], [0.3125, 0.0625, 0.625]],
            "options": {"epsilon": 0.05, "fixed_column": 1, "n_max": 6}
        }"#,
    );
    let out_path = dir.join("approx-report.json");
    let out = run(&[
        "witness",
        path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["body"]["outcome"], "found");
    assert!(report["body"]["transition_residual"].as_f64().unwrap() <= 1e-8);
    assert!(report["body"]["mixing_drift"].as_f64().unwrap() <= 0.05 + 1e-12);
    // fixed column of the mixed target equals the original target column
    let mixed: Vec<Vec<f64>> =
        serde_json::from_value(report["body"]["mixed_target_columns"].clone()).unwrap();
    assert_eq!(mixed[1], vec![0.3125, 0.0625, 0.625]);
}

#[test]
fn scan_rows_refine_into_supersets() {
    let dir = scratch_dir();
    let path = write_problem(&dir, "same.json", IDENTICAL_DICHOTOMY);
    let coarse = report_from(&run(&[
        "scan",
        path.to_str().unwrap(),
        "--resolution",
        "8",
    ]));
    let fine = report_from(&run(&[
        "scan",
        path.to_str().unwrap(),
        "--resolution",
        "16",
    ]));
    let params = |report: &serde_json::Value| -> Vec<(String, String)> {
        report["body"]["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["family"].as_str().unwrap().to_string(),
                    r["parameter"].as_str().unwrap().to_string(),
                )
            })
            .collect()
    };
    let coarse_params = params(&coarse);
    let fine_params: std::collections::HashSet<_> = params(&fine).into_iter().collect();
    for p in &coarse_params {
        assert!(fine_params.contains(p), "coarse point {p:?} missing from the fine scan");
    }
    // identical tuples: every margin is zero
    for row in coarse["body"]["rows"].as_array().unwrap() {
        assert!(row["margin"].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn flags_override_file_options() {
    let dir = scratch_dir();
    let path = write_problem(
        &dir,
        "opts.json",
        r#"{
            "d": 2,
            "p": [[0.5, 0.5], [0.25, 0.75]],
            "q": [[0.5, 0.5], [0.25, 0.75]],
            "options": {"resolution": 4}
        }"#,
    );
    let from_file = report_from(&run(&[
        "check",
        path.to_str().unwrap(),
        "--mode",
        "matrix-necessary",
    ]));
    assert_eq!(from_file["config"]["resolution"], 4);
    let from_flag = report_from(&run(&[
        "check",
        path.to_str().unwrap(),
        "--mode",
        "matrix-necessary",
        "--resolution",
        "6",
    ]));
    assert_eq!(from_flag["config"]["resolution"], 6);
    assert!(
        from_flag["body"]["points_evaluated"].as_u64().unwrap()
            > from_file["body"]["points_evaluated"].as_u64().unwrap()
    );
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = scratch_dir();
    // any verdict exits 0, including violated criteria
    let violated = write_problem(
        &dir,
        "violated.json",
        r#"{"d": 1, "p": [[0.5, 0.5]], "q": [[0.9, 0.1]]}"#,
    );
    let out = run(&["check", violated.to_str().unwrap(), "--mode", "aubrun-nechita"]);
    let report = report_from(&out);
    assert_eq!(report["body"]["verdict"], "Violated");
    assert_eq!(out.status.code(), Some(0));

    // validation errors exit 2
    let ragged = write_problem(
        &dir,
        "ragged.json",
        r#"{"d": 2, "p": [[0.5, 0.5], [1.0]], "q": [[0.5, 0.5], [0.5, 0.5]]}"#,
    );
    let out = run(&["check", ragged.to_str().unwrap(), "--mode", "oneshot"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["check", violated.to_str().unwrap(), "--mode", "matrix-sufficient"]);
    assert_eq!(out.status.code(), Some(2), "matrix mode on d=1 is a validation error");
    let missing = dir.join("missing.json");
    let out = run(&["check", missing.to_str().unwrap(), "--mode", "oneshot"]);
    assert_eq!(out.status.code(), Some(2));

    // size caps exit 3: the target's top entry blocks majorization at every
    // power, so the search must run until the tensor cap
    let big = write_problem(
        &dir,
        "big.json",
        r#"{
            "d": 1,
            "p": [[0.55, 0.25, 0.1, 0.05, 0.03, 0.02]],
            "q": [[0.56, 0.2, 0.1, 0.05, 0.04, 0.03, 0.01, 0.01]],
            "options": {"n_max": 30}
        }"#,
    );
    let out = run(&["witness", big.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "tensor powers past the cap must abort with the cap code: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn noise_mixed_target_passes_the_strict_scan() {
    // mixing any full-support tuple with distinct columns toward uniform
    // noise produces a target that satisfies the sufficiency scan strictly
    let p = majorize::tuple::MatrixTuple::from_columns(&[
        vec![0.625, 0.3125, 0.0625],
        vec![0.4375, 0.125, 0.4375],
    ])
    .unwrap();
    let w = majorize::vector::ProbVector::uniform(3).unwrap();
    let mixed = majorize::witness::noise_mix(&p, &w, 0.1).unwrap();
    let fmt_cols = |t: &majorize::tuple::MatrixTuple| -> String {
        let cols: Vec<String> = t
            .columns()
            .iter()
            .map(|c| {
                let entries: Vec<String> =
                    c.entries().iter().map(|e| format!("{e:?}")).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        format!("[{}]", cols.join(","))
    };
    let dir = scratch_dir();
    let path = write_problem(
        &dir,
        "mixed.json",
        &format!(r#"{{"d": 2, "p": {}, "q": {}}}"#, fmt_cols(&p), fmt_cols(&mixed)),
    );
    let report = report_from(&run(&[
        "check",
        path.to_str().unwrap(),
        "--mode",
        "matrix-sufficient",
    ]));
    assert_eq!(report["body"]["verdict"], "StrictlySatisfied");
    assert_eq!(report["body"]["pairwise_tropical"], "StrictlySatisfied");
    assert!(report["body"]["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn problem_files_round_trip() {
    let text = r#"{
        "d": 2,
        "p": [[0.5, 0.5], ["1/4", "3/4"]],
        "q": [[0.5, 0.5], [0.25, 0.75]],
        "options": {"resolution": 8, "epsilon": 0.1}
    }"#;
    let parsed: serde_json::Value = serde_json::from_str(text).unwrap();
    let reserialized = serde_json::to_string(&parsed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(parsed, reparsed);
}
