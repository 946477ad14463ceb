// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_driven-qubits"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn help_lists_every_command_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for word in [
        "evolve", "spectrum", "teq-curve", "phase-diagram", "concurrence-map", "steady-state", "--config", "--out",
        "--format", "--workers", "--eps", "--g ", "--g1", "--g2", "--nth", "--period", "--pulse-fraction",
        "--delta1", "--delta2", "--n-periods", "--initial-state",
    ] {
        assert!(text.contains(word), "help lacks {word}");
    }
}

#[test]
fn spectrum_prints_gap_and_teq() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--eps", "0.0436"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let (gap, t_eq) = (field(&text, "gap"), field(&text, "t_eq"));
    assert!(gap > 0.0 && (gap * t_eq - 1.0).abs() < 1e-9);

    let o = run(&["spectrum", "--out", "s.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("eps,t_eq,gap,valid"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn evolve_writes_one_row_per_period() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["evolve", "--n-periods", "500", "--out", "traj.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,time,polarization,purity,entropy,concurrence");
    assert_eq!(lines.len(), 502);
    assert!(lines[1].starts_with("0,"));
    assert!(lines[501].starts_with("500,"));
    assert!(!csv.contains('\r'));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str, workers: &str| {
        vec![
            "phase-diagram".to_string(),
            "--eps".into(),
            "0.001:0.12:30".into(),
            "--g".into(),
            "0.01:0.05:3".into(),
            "--workers".into(),
            workers.into(),
            "--out".into(),
            out.into(),
        ]
    };
    for (out, w) in [("a.csv", "1"), ("b.csv", "4"), ("c.csv", "4")] {
        let a = args(out, w);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(run(&a, dir.path()).status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, fs::read(dir.path().join("c.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("eps,g,t_eq,label,valid"));
    assert_eq!(text.lines().count(), 91);
}

#[test]
fn json_output_has_records_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["teq-curve", "--eps", "0.01:0.05:5", "--format", "json", "--out", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 5);
    assert_eq!(doc["meta"]["params"]["g1"], 0.01);
    assert!(doc["records"][0]["t_eq"].as_f64().unwrap() > 0.0);
}

#[test]
fn concurrence_map_and_steady_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["concurrence-map", "--eps", "0.02:0.04:3", "--n-periods", "20", "--out", "m.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 21);

    let o = run(&["steady-state"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "concurrence").abs() < 1e-12);
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["spectrum", "--period", "-1"],
        vec!["spectrum", "--eps", "0:0.1:3"],
        vec!["evolve", "--initial-state", "excited"],
        vec!["spectrum", "--bogus"],
        vec!["spectrum", "--config", "missing.json"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = run(&["spectrum", "--period", "-1"], dir.path());
    assert!(stderr(&o).contains("`T`"));
}

#[test]
fn numerical_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--g1", "0", "--g2", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no spectral gap"));
}

#[test]
fn rate_warning_does_not_block() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--g1", "0.001", "--g2", "0.01"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("g1 < sqrt(2)*g2"));
}

#[test]
fn precedence_is_flag_then_file_then_default() {
    let dir = tempfile::tempdir().unwrap();
    let file_model = [
        ("epsilon", 0.02),
        ("g", 0.04),
        ("g1", 0.02),
        ("g2", 0.004),
        ("n_th", 0.1),
        ("T", 1.5),
        ("pulse_fraction", 0.4),
        ("delta1", 0.001),
        ("delta2", 0.002),
    ];
    let flags = [
        ("epsilon", "--eps", 0.03),
        ("g", "--g", 0.06),
        ("g1", "--g1", 0.015),
        ("g2", "--g2", 0.003),
        ("n_th", "--nth", 0.2),
        ("T", "--period", 1.2),
        ("pulse_fraction", "--pulse-fraction", 0.3),
        ("delta1", "--delta1", -0.001),
        ("delta2", "--delta2", -0.002),
    ];
    let model: serde_json::Map<String, serde_json::Value> =
        file_model.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v))).collect();
    let cfg = serde_json::json!({ "model": model, "n_periods": 3, "initial_state": "ground" });
    fs::write(dir.path().join("run.json"), cfg.to_string()).unwrap();

    // evolve echoes the effective parameters in its JSON meta block
    let meta = |extra: &[&str]| {
        let mut args = vec!["evolve", "--config", "run.json", "--format", "json", "--out", "o.json"];
        args.extend_from_slice(extra);
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("o.json")).unwrap()).unwrap();
        doc
    };
    let key = |k: &str| if k == "T" { "period".to_string() } else { k.to_string() };

    let doc = meta(&[]);
    assert_eq!(doc["records"].as_array().unwrap().len(), 4);
    assert_eq!(doc["records"][0]["polarization"], 2.0);
    for (k, v) in file_model {
        assert_eq!(doc["meta"]["params"][key(k)], serde_json::json!(v), "file value for {k}");
    }
    for (k, flag, v) in flags {
        let value = v.to_string();
        let doc = meta(&[flag, &value]);
        assert_eq!(doc["meta"]["params"][key(k)], serde_json::json!(v), "flag {flag}");
        for (other, fv) in file_model.iter().filter(|(o, _)| *o != k) {
            assert_eq!(doc["meta"]["params"][key(other)], serde_json::json!(fv), "{other} with {flag}");
        }
    }
    let doc = meta(&["--n-periods", "5", "--initial-state", "both-excited"]);
    assert_eq!(doc["records"].as_array().unwrap().len(), 6);
    assert_eq!(doc["records"][0]["polarization"], -2.0);

    // defaults fill what the file omits
    fs::write(dir.path().join("run.json"), r#"{"model": {"g1": 0.02}}"#).unwrap();
    let doc = meta(&[]);
    assert_eq!(doc["meta"]["params"]["g1"], 0.02);
    assert_eq!(doc["meta"]["params"]["g2"], 0.0025);
    assert_eq!(doc["records"].as_array().unwrap().len(), 501);
}
