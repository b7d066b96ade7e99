use std::process::Command;

use loccxform::io::ReportJson;
use loccxform::{optimal_fidelity, Spectrum};
use loccxform_cli::{run, EXIT_INPUT, EXIT_IO, EXIT_OK, EXIT_ORACLE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("loccxform").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const PSI: &str = r#"{"schmidt":[0.8,0.2]}"#;
const BELL: &str = r#"{"schmidt":[0.5,0.5]}"#;

#[test]
fn report_worked_example_json() {
    let (code, out, _) = call(&["--format", "json", "report", "--psi", PSI, "--phi", BELL]);
    assert_eq!(code, EXIT_OK);
    let rep: ReportJson = serde_json::from_str(&out).unwrap();
    assert!((rep.f_opt - 0.9).abs() < 1e-12);
    assert!((rep.p_conclusive - 0.4).abs() < 1e-12);
    assert!(!rep.deterministic);
    assert_eq!(rep.segments.len(), 2);
}

#[test]
fn report_json_round_trips_to_recomputation() {
    let (_, out, _) = call(&["--format", "json", "report", "--psi", r#"{"schmidt":[0.55,0.25,0.2]}"#, "--phi", r#"{"schmidt":[0.5,0.4,0.1]}"#]);
    let parsed: ReportJson = serde_json::from_str(&out).unwrap();
    let a = Spectrum::new(vec![0.55, 0.25, 0.2]).unwrap();
    let b = Spectrum::new(vec![0.5, 0.4, 0.1]).unwrap();
    let fresh = ReportJson::from(&optimal_fidelity(&a, &b).unwrap());
    assert!((parsed.f_opt - fresh.f_opt).abs() <= 1e-12);
    assert!((parsed.trace_distance - fresh.trace_distance).abs() <= 1e-12);
    for (x, y) in parsed.xi.iter().zip(&fresh.xi) {
        assert!((x - y).abs() <= 1e-12);
    }
    // recompute from the emitted xi itself
    let xi = Spectrum::new(parsed.xi.clone()).unwrap();
    assert!((loccxform::aligned_fidelity(&xi, &b) - parsed.f_opt).abs() <= 1e-12);
}

#[test]
fn report_identical_states_text() {
    let (code, out, _) = call(&["report", "--psi", BELL, "--phi", BELL]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("f_opt: 1.000000000000"), "{out}");
    assert!(out.contains("deterministic: true"));
}

#[test]
fn report_warns_about_unsorted_input() {
    let (_, out, _) = call(&["report", "--psi", r#"{"schmidt":[0.2,0.8]}"#, "--phi", BELL]);
    assert!(out.contains("warning"), "{out}");
}

#[test]
fn validation_errors_exit_2() {
    let (code, _, err) = call(&["report", "--psi", r#"{"schmidt":[0.5,0.6]}"#, "--phi", BELL]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not normalized"), "{err}");
    let (code, _, err) = call(&["report", "--psi", "{\"schmidt\":", "--phi", BELL]);
    assert_eq!(code, EXIT_INPUT);
    assert!(!err.is_empty());
    let (code, _, _) = call(&["dilute", "0", "--phi", BELL]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = call(&["teleport", r#"{"schmidt":[0.5,0.3,0.2]}"#, "--n", "2"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = call(&["verify", "--psi", PSI, "--phi", BELL]);
    assert_eq!(code, EXIT_INPUT, "verify requires --seed");
}

#[test]
fn missing_state_file_exits_3() {
    let (code, _, _) = call(&["schmidt", "/nonexistent/state.json"]);
    assert_eq!(code, EXIT_IO);
}

#[test]
fn schmidt_from_file_with_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let h = 0.5f64.sqrt();
    std::fs::write(&path, format!(r#"{{"amplitudes":[[[0,0],[{h},0]],[[{h},0],[0,0]]]}}"#)).unwrap();
    let (code, out, _) = call(&["--format", "json", "schmidt", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let p: Vec<f64> = serde_json::from_value(v["schmidt"].clone()).unwrap();
    assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
}

#[test]
fn teleport_dilute_catalyze_nl_dist() {
    let (_, out, _) = call(&["--format", "json", "teleport", r#"{"schmidt":[1,0]}"#]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["teleportation_fidelity"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);

    let (_, out, _) = call(&["--format", "json", "dilute", "2", "--phi", r#"{"schmidt":[0.6,0.3,0.1]}"#]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["f_opt"].as_f64().unwrap() - 0.9).abs() < 1e-12);

    let (code, out, _) = call(&[
        "--format", "json", "catalyze",
        "--psi", r#"{"schmidt":[0.4,0.4,0.1,0.1]}"#,
        "--phi", r#"{"schmidt":[0.5,0.25,0.25,0]}"#,
        "--eta", r#"{"schmidt":[0.6,0.4]}"#,
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["convertible_bare"], false);
    assert_eq!(v["convertible_with_catalyst"], true);
    assert!(v["delta_t"].as_f64().unwrap() > 0.0);

    let (_, out, _) = call(&["--format", "json", "nl-dist", r#"{"schmidt":[1,0]}"#, BELL]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["f_nl"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["t_nl"].as_f64().unwrap() - 2.0 * 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn verify_reports_claims_and_is_reproducible() {
    let args = ["--format", "json", "verify", "--psi", PSI, "--phi", BELL, "--seed", "5", "--trials", "500", "--ensembles", "100"];
    let (code, out, _) = call(&args);
    assert_eq!(code, EXIT_OK);
    let v: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(v.len(), 3);
    for c in &v {
        for key in ["claim", "theorem_value", "oracle_value", "gap", "pass"] {
            assert!(c.get(key).is_some());
        }
    }
    assert_eq!(call(&args).1, out);
}

#[test]
fn verify_flags_resolution_limited_grid() {
    // the optimal output keeps alpha's weight 0.004, which a 0.01 grid cannot hold
    let (code, out, err) = call(&[
        "verify",
        "--psi", r#"{"schmidt":[0.5848032359992414,0.41112050628634655,0.004076257714412008]}"#,
        "--phi", r#"{"schmidt":[0.602212106457499,0.20262927427720856,0.19515861926529243]}"#,
        "--seed", "1", "--trials", "100", "--ensembles", "50",
    ]);
    assert_eq!(code, EXIT_ORACLE, "{out}");
    assert!(err.contains("grid"));
}

#[test]
fn budget_env_caps_grid() {
    let out = Command::new(env!("CARGO_BIN_EXE_loccxform"))
        .args(["verify", "--psi", PSI, "--phi", BELL, "--seed", "1"])
        .env("LOCCXFORM_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn sweep_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    // alpha(t) = (1 - t/2, t/2), so b^2 = t/2 runs over 0.1..0.5
    let (code, _, _) = call(&[
        "sweep", "--from", r#"{"schmidt":[1,0]}"#, "--to", BELL, "--phi", BELL,
        "--start", "0.2", "--stop", "1.0", "--points", "5", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,f_opt,p_conclusive,trace_distance"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for (row, b2) in rows.iter().zip([0.1, 0.2, 0.3, 0.4, 0.5]) {
        let expected = 0.5 + (b2 * (1.0f64 - b2)).sqrt();
        assert!((row[1] - expected).abs() < 1e-11, "{row:?} vs {expected}");
    }
}

#[test]
fn sweep_to_unwritable_path_exits_3() {
    let (code, _, _) = call(&[
        "sweep", "--from", PSI, "--to", BELL, "--phi", BELL, "--out", "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(code, EXIT_IO);
}

#[test]
fn binary_runs_report() {
    let out = Command::new(env!("CARGO_BIN_EXE_loccxform"))
        .args(["report", "--psi", PSI, "--phi", BELL])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("p_conclusive: 0.400000000000"));
}
