use std::fs;
use std::process::{Command, Output};

use qcorr_core::{CorrelationSample, Scenario, TransitionResult};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Serialize, Deserialize)]
struct Document {
    scenario: Scenario,
    samples: Vec<CorrelationSample>,
    transition: TransitionResult,
}

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn dephasing_scenario_starts_with_unit_classical_correlation() {
    let out = qcorr(&["--family", "mazzola", "--c3", "0.6", "--gamma", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("t,I,C,D,Icomp,c1,c2,c3"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 801);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][2] - 1.0).abs() < 1e-6);
    assert!((rows[0][3] - 0.278072).abs() < 1e-6);
    let trailer = text.lines().last().unwrap();
    assert!(trailer.starts_with("# detected_t: 2.55"), "{trailer}");
    assert!(trailer.ends_with("analytic_t: 2.55412812e-1"), "{trailer}");
}

#[test]
fn werner_reports_no_transition() {
    let out = qcorr(&["--family", "werner", "--beta", "0.8", "--gamma", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().last().unwrap().starts_with("# detected_t: none"));
}

#[test]
fn maximally_entangled_pure_state_keeps_one_bit() {
    let out = qcorr(&["--family", "pure", "--theta", "0.7853981634", "--gamma", "1"]);
    assert!(out.status.success());
    for row in rows(&stdout(&out)) {
        assert!((row[2] - 1.0).abs() < 1e-6, "C = {}", row[2]);
    }
}

#[test]
fn validation_reports() {
    let bad = qcorr(&["--family", "mazzola", "--c3", "1.2", "--validate-only"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains("|c₃| ≤ 1 violated"));

    let werner = qcorr(&["--family", "werner", "--beta", "-0.5", "--validate-only"]);
    assert_eq!(werner.status.code(), Some(2));
    assert!(stdout(&werner).contains("not PSD"));

    let pure = qcorr(&["--family", "pure", "--theta", "0.7853981634", "--validate-only"]);
    assert_eq!(pure.status.code(), Some(0));
    assert!(stdout(&pure).starts_with("valid"));
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["--family", "mazzola", "--c3", "1.2"],
        vec!["--family", "werner", "--beta", "0.5", "--theta", "0.3"],
        vec!["--family", "pure"],
        vec!["--gamma", "-1"],
        vec!["--points", "1"],
        vec!["--channel", "teleport"],
    ] {
        let out = qcorr(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--family", "mazzola", "--c3", "0.4", "--sign", "-", "--points", "101"];
    assert_eq!(qcorr(&args).stdout, qcorr(&args).stdout);
    let json = ["--family", "werner", "--beta", "0.6", "--points", "51", "--format", "json"];
    assert_eq!(qcorr(&json).stdout, qcorr(&json).stdout);
}

#[test]
fn json_round_trips_and_feeds_back_as_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("run.json");
    let out_str = out_path.to_str().unwrap();
    let out = qcorr(&["--family", "mazzola", "--c3", "0.6", "--points", "121", "--format", "json", "--out", out_str]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let text = fs::read_to_string(&out_path).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    let samples = doc["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 121);
    let typed: Document = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&typed).unwrap() + "\n", text);
    assert!(doc["transition"]["detected_t"].is_number());
    assert!((doc["transition"]["analytic_t"].as_f64().unwrap() - 0.255413).abs() < 1e-6);

    let config_path = dir.path().join("scenario.json");
    fs::write(&config_path, doc["scenario"].to_string()).unwrap();
    let again = qcorr(&["--config", config_path.to_str().unwrap(), "--format", "json"]);
    assert!(again.status.success(), "{}", stderr(&again));
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, r#"{"family": "mazzola", "c3": 0.3, "t_max": 1.0, "n_points": 11}"#).unwrap();
    let out = qcorr(&["--config", path.to_str().unwrap(), "--c3", "0.5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = rows(&stdout(&out));
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10][0], 1.0);
    assert_eq!(rows[0][7], 0.5);
}

#[test]
fn unknown_config_fields_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, r#"{"family": "werner", "beta": 0.5, "temperature": 3}"#).unwrap();
    let out = qcorr(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("temperature"));
}

#[test]
fn alternative_channels_run() {
    for channel in ["depolarizing", "amplitude_damping"] {
        let out = qcorr(&["--family", "werner", "--beta", "0.7", "--channel", channel, "--points", "41"]);
        assert!(out.status.success(), "{channel}: {}", stderr(&out));
        let rows = rows(&stdout(&out));
        assert!(rows.iter().all(|r| r[3] >= 0.0 && r[3] <= r[1] + 1e-8));
    }
}
