use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tsarma::ingest::{parse_csv, ColumnMapping};
use tsarma::GISTEMP_CSV;
use tsarma_core::series::{difference_values, integrate_values};

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/gistemp_annual.csv")
}

fn tsarma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsarma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

const COMPARED_ORDERS: [&str; 8] = [
    "--order", "1,0,0", "--order", "1,0,1", "--order", "1,1,1", "--order", "1,2,0",
];

#[test]
fn vendored_data_ingests_and_round_trips() {
    let s = parse_csv(GISTEMP_CSV, &ColumnMapping::default()).unwrap();
    assert_eq!(s.len(), 143);
    assert_eq!(s.start(), 1880);
    assert_eq!(s.end(), 2022);
    let x = s.values();
    let back = integrate_values(&difference_values(x, 2), &x[..2]).unwrap();
    for (a, b) in back.iter().zip(x) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn ingest_check_reports_series_envelope() {
    let out = tsarma(&["ingest-check", data().to_str().unwrap(), "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "tsarma-report");
    assert_eq!(v["command"], "ingest-check");
    assert_eq!(v["result"]["n"], 143);
    assert_eq!(v["result"]["start"], 1880);
}

#[test]
fn report_ranks_arma11_above_both_arima_variants() {
    let dir = tempfile::tempdir().unwrap();
    let input = data();
    let mut args = vec![
        "report",
        input.to_str().unwrap(),
        "--no-constant",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    args.extend(COMPARED_ORDERS);
    let out = tsarma(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let ranking: Vec<&str> = report["comparison"]["by_max_residual"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let pos = |label: &str| ranking.iter().position(|l| *l == label).unwrap();
    assert!(pos("ARMA(1,1)") < pos("ARIMA(1,1,1)"));
    assert!(pos("ARMA(1,1)") < pos("ARIMA(1,2,0)"));
    assert_eq!(report["models"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("report.txt").exists());
    assert_eq!(report["adf"]["reject_unit_root"], false);
}

#[test]
fn report_json_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let input = data();
    for dir in [&a, &b] {
        let mut args = vec!["report", input.to_str().unwrap(), "--seed", "7", "--format", "json"];
        args.extend(["--out", dir.path().to_str().unwrap()]);
        args.extend(COMPARED_ORDERS);
        assert!(tsarma(&args).status.success());
    }
    let x = std::fs::read(a.path().join("report.json")).unwrap();
    let y = std::fs::read(b.path().join("report.json")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn auto_selects_first_order_ar_on_second_differences() {
    let out = tsarma(&[
        "auto",
        data().to_str().unwrap(),
        "--max-p",
        "1",
        "--max-q",
        "1",
        "--min-d",
        "2",
        "--max-d",
        "2",
        "--format",
        "json",
    ]);
    let v = stdout_json(&out);
    let order = &v["result"]["selection"]["selected"];
    assert_eq!(
        (order["p"].as_u64(), order["d"].as_u64(), order["q"].as_u64()),
        (Some(1), Some(2), Some(0))
    );
    let phi = v["result"]["model"]["fit"]["params"]["ar"][0].as_f64().unwrap();
    assert!((phi + 0.4902).abs() < 0.02, "{phi}");
}

#[test]
fn empty_grid_writes_failure_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = tsarma(&[
        "report",
        data().to_str().unwrap(),
        "--min-d",
        "2",
        "--max-d",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("selection grid is empty"));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("failure.json")).unwrap()).unwrap();
    assert_eq!(manifest["failed_stage"], "config");
    assert!(manifest["completed_stages"].as_array().unwrap().is_empty());
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn missing_file_fails_at_ingest_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let out = tsarma(&[
        "report",
        missing.to_str().unwrap(),
        "--order",
        "1,0,0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("failure.json")).unwrap()).unwrap();
    assert_eq!(manifest["failed_stage"], "ingest");
    assert_eq!(manifest["completed_stages"], serde_json::json!(["config"]));
}

#[test]
fn invalid_order_is_rejected_by_argument_parser() {
    let out = tsarma(&["fit", data().to_str().unwrap(), "--order", "1,0"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("p,d,q"));
}

#[test]
fn seeded_simulation_is_reproducible_and_ingestible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("sim{i}.csv"))).collect();
    for p in &paths {
        let out = tsarma(&[
            "simulate",
            "--ar",
            "0.6",
            "--ma",
            "-0.3",
            "--n",
            "120",
            "--seed",
            "42",
            "--start-year",
            "1900",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    let s = tsarma::ingest(&paths[0], &ColumnMapping::default()).unwrap();
    assert_eq!((s.len(), s.start()), (120, 1900));

    let out = tsarma(&[
        "biased", "--beta", "0.7", "--land", "0.004", "--sea", "0.007", "--n", "50", "--seed", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 51);
}

#[test]
fn forecast_and_diagnose_emit_envelopes() {
    let f = stdout_json(&tsarma(&[
        "forecast",
        data().to_str().unwrap(),
        "--order",
        "1,0,1",
        "--no-constant",
        "--horizon",
        "5",
        "--format",
        "json",
    ]));
    let rows = f["result"].as_array().unwrap();
    assert_eq!(rows[0]["forecast"]["point"].as_array().unwrap().len(), 5);

    let d = stdout_json(&tsarma(&[
        "diagnose",
        data().to_str().unwrap(),
        "--order",
        "1,1,1",
        "--format",
        "json",
    ]));
    let max = d["result"][0]["diagnostics"]["max_abs_residual"].as_f64().unwrap();
    assert!(max > 0.0 && max < 1.0);
}

#[test]
fn svg_figures_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = tsarma(&[
        "forecast",
        data().to_str().unwrap(),
        "--order",
        "1,0,1",
        "--format",
        "svg",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("arma_1_1_forecast.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
}
