use std::process::{Command, Output};

use collapse_entanglement::cli::CSV_HEADER;
use collapse_entanglement::fock::DensityOperatorJson;
use collapse_entanglement::DensityOperator;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collapse-ent"))
        .args(args)
        .output()
        .expect("spawn collapse-ent")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["entropy", "--mass", "1", "--omega", "0.1", "--stats", "boson"]).status.code(), Some(0));
    let bad = run(&["entropy", "--mass", "0", "--omega", "0.1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("mass"));
    assert_eq!(run(&["entropy", "--mass", "-1", "--omega", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["crossover", "--mass", "two"]).status.code(), Some(2));
    assert_eq!(run(&["crossover", "--mass", "1", "--lo", "1", "--hi", "2"]).status.code(), Some(3));
    assert_eq!(run(&["entropy", "--mass", "1", "--x", "1e-5", "--stats", "boson"]).status.code(), Some(3));
    assert_eq!(run(&["state", "--mass", "1", "--x", "1e-5", "--stats", "boson"]).status.code(), Some(3));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn single_point_sweep_equals_entropy() {
    let e = run(&["entropy", "--mass", "1.3", "--omega", "0.07", "--stats", "both"]);
    let s = run(&["sweep", "--mass", "1.3", "--omega-min", "0.07", "--points", "1", "--stats", "both"]);
    assert_eq!(e.stdout, s.stdout);
    assert!(stdout(&e).starts_with(CSV_HEADER));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep", "--mass", "1", "--omega-min", "0.01", "--omega-max", "0.2", "--points", "7",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 14);
}

#[test]
fn partial_failure_rows() {
    let o = run(&["sweep", "--mass", "1", "--x-min", "1e-7", "--x-max", "2", "--points", "6", "--stats", "boson"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0][9].contains("overflow"));
    assert_eq!(&rows[0][5], "");
    assert_eq!(&rows[5][9], "");
}

#[test]
fn state_json_round_trips_to_sweep_entropy() {
    for stats in ["boson", "fermion"] {
        let st = run(&["state", "--mass", "1", "--omega", "0.05", "--stats", stats]);
        assert!(st.status.success());
        let v: Value = serde_json::from_str(&stdout(&st)).unwrap();
        let dump: DensityOperatorJson = serde_json::from_value(v.clone()).unwrap();
        let rho = DensityOperator::from_json(&dump).unwrap();
        let trace: f64 = dump.diag.iter().sum();
        assert!((1.0 - 1e-9..=1.0).contains(&trace));

        let sw = run(&["sweep", "--mass", "1", "--omega-min", "0.05", "--points", "1", "--stats", stats, "--format", "json"]);
        let recs: Value = serde_json::from_str(&stdout(&sw)).unwrap();
        let s_numeric = recs[0]["S_numeric"].as_f64().unwrap();
        assert!((rho.von_neumann_entropy().unwrap() - s_numeric).abs() < 1e-12);
        assert_eq!(v["squeezing"]["statistics"], stats);
    }
}

#[test]
fn spectrum_reports_hawking_temperature() {
    let o = run(&["spectrum", "--mass", "0.5", "--omega", "0.3", "--stats", "fermion"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t_h = v["hawking_temperature"].as_f64().unwrap();
    assert!((t_h - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert!((v["fitted_temperature_ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let s = v["entropy"].as_f64().unwrap();
    assert!(s > 0.0 && s < 2.0);
}

#[test]
fn crossover_output() {
    let o = run(&["crossover", "--mass", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let row = rdr.records().next().unwrap().unwrap();
    let x: f64 = row[0].parse().unwrap();
    let w: f64 = row[1].parse().unwrap();
    assert!(x > 0.3 && x < 0.5);
    assert_eq!(w, x / (4.0 * std::f64::consts::PI));
    assert!(row[3].parse::<f64>().unwrap().abs() < 1e-8);
}

#[test]
fn linear_grid_json_sweep() {
    let o = run(&[
        "sweep", "--mass", "2", "--omega-min", "0.01", "--omega-max", "0.05", "--points", "5",
        "--grid", "linear", "--stats", "fermion", "--format", "json",
    ]);
    let v: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 5);
    assert_eq!(v[0]["omega"].as_f64().unwrap(), 0.01);
    assert_eq!(v[4]["omega"].as_f64().unwrap(), 0.05);
    assert!(v.iter().all(|r| r["error"].is_null()));
}
