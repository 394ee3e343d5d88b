use std::process::{Command, Output};

use qudit_memory::cli::emit::{read_curve_csv, read_curve_json};
use qudit_memory::cli::{curve_table, Command as RunCommand, RawConfig, RunConfig};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qudit-memory"))
        .args(args)
        .env_remove("QUDIT_MEMORY_WORKERS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn curve_has_one_row_per_grid_point() {
    let text = stdout(&["curve", "--model", "qd", "--d", "4", "--eta", "0.8", "--nu", "1", "--mu-points", "101"]);
    let table = read_curve_csv(&text).unwrap();
    assert_eq!(table.rows.len(), 101);
    assert_eq!(table.rows[0].mu, 0.0);
    assert_eq!(table.rows[100].mu, 1.0);
    assert!(text.lines().any(|l| l == "mu,I_product,I_entangled,delta"));
    assert!(!table.has_custom);
}

#[test]
fn crossover_reports_none_for_qutrit_correlated_phases() {
    let text = stdout(&["crossover", "--model", "qd", "--d", "3", "--eta", "0.8", "--nu", "0"]);
    let row = text.lines().last().unwrap();
    assert_eq!(row.split(',').nth(4), Some("none"));

    let text = stdout(&["crossover", "--model", "qd", "--d", "3", "--eta", "0.8", "--nu", "0", "--format", "json"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert!(doc["rows"][0]["mu_c"].is_null());
    assert_eq!(doc["metadata"]["command"], "crossover");
}

#[test]
fn noiseless_curve_is_flat() {
    let text = stdout(&["curve", "--model", "qd", "--d", "3", "--eta", "1", "--nu", "0.3", "--mu-points", "7"]);
    let full = 2.0 * 3f64.log2();
    for r in read_curve_csv(&text).unwrap().rows {
        assert!((r.i_product - full).abs() < 1e-10 && (r.i_entangled - full).abs() < 1e-10);
    }
}

#[test]
fn emitted_values_round_trip_exactly() {
    let mut raw = RawConfig::new();
    for (k, v) in [("model", "qcd"), ("d", "3"), ("eta", "0.3"), ("nu", "0.6"), ("mu-points", "17"), ("state", "alpha=0.7")] {
        raw.set(k, v).unwrap();
    }
    let config = RunConfig::resolve(RunCommand::Curve, &raw).unwrap();
    let table = curve_table(&config).unwrap();
    assert!(table.has_custom);

    let args = ["curve", "--model", "qcd", "--d", "3", "--eta", "0.3", "--nu", "0.6", "--mu-points", "17", "--state", "alpha=0.7"];
    let csv = stdout(&args);
    assert_eq!(read_curve_csv(&csv).unwrap().rows, table.rows);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    assert_eq!(read_curve_json(&stdout(&json_args)).unwrap().rows, table.rows);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig2.conf");
    std::fs::write(&cfg, "# figure recipe\nmodel = qd\nd = 2\neta = 0.8\nnu = 0\nmu_points = 5\n").unwrap();
    let out_path = dir.path().join("out.csv");
    let out = run(&[
        "curve",
        "--config",
        cfg.to_str().unwrap(),
        "--d",
        "4",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let table = read_curve_csv(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(table.metadata.contains(&("d".to_string(), "4".to_string())));
    assert_eq!(table.rows.len(), 5);
}

#[test]
fn invalid_parameters_name_field_and_range() {
    let cases: [(&[&str], &str); 5] = [
        (&["curve", "--model", "qd", "--d", "3", "--eta", "1.2", "--nu", "0"], "eta = 1.2 is outside its valid range [-0.125, 1]"),
        (&["curve", "--model", "qcd", "--d", "3", "--eta", "0.3", "--nu", "-1"], "nu = -1 is outside its valid range [0, 1]"),
        (&["curve", "--model", "xx", "--d", "3", "--eta", "0.3", "--nu", "0"], "model: unknown value 'xx'"),
        (&["crossover", "--model", "qd", "--d", "1", "--eta", "0.3", "--nu", "0"], "d: 1 is outside its valid range [2, inf)"),
        (&["crossover", "--model", "qd", "--d", "2", "--eta", "0.3", "--nu", "0", "--grid-n", "3"], "grid-n: 3 is outside its valid range [16, inf)"),
    ];
    for (args, expected) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(expected), "{err}");
    }
}

#[test]
fn unwritable_output_is_an_error() {
    let out = run(&["curve", "--model", "qd", "--d", "2", "--eta", "0.5", "--nu", "0", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("cannot write"));
}

#[test]
fn sweep_rows_in_parameter_order() {
    let text = stdout(&["sweep", "--model", "qd", "--dims", "2,3", "--etas", "0.8", "--nus", "0,1"]);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[0][1], rows[0][5]), ("2", "even"));
    assert_eq!((rows[2][1], rows[2][4], rows[2][5]), ("3", "none", "odd"));
    assert_ne!(rows[3][4], "none");
}

#[test]
fn validate_passes() {
    let out = run(&["validate"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
    assert!(text.contains("12 of 12 checks passed"));
}

#[test]
fn workers_from_environment() {
    let args = ["crossover", "--model", "qd", "--d", "2", "--eta", "0.8", "--nu", "0"];
    let base = stdout(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_qudit-memory"))
        .args(args)
        .env("QUDIT_MEMORY_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), base);
    let out = Command::new(env!("CARGO_BIN_EXE_qudit-memory"))
        .args(args)
        .env("QUDIT_MEMORY_WORKERS", "0")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stderr).unwrap().contains("workers"));
}
