mod common;

use chrono::{NaiveDate, Timelike};
use common::*;
use serde_json::Value;

fn json(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn ingest_half_hourly_happy_path() {
    let dir = tempfile::tempdir().unwrap();
    let start = NaiveDate::from_ymd_opt(2019, 1, 1).unwrap();
    let load = write_halfhourly(dir.path(), "sg.csv", start, 3, |t| 5000.0 + f64::from(t.hour()), &[]);
    let out = dir.path().join("out");
    let r = loadstab(&["ingest", "--load", path_str(&load), "--format", "half-hourly", "--out-dir", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(out.join("hourly.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 72);
    // Slot 1 sums the 00:30 reading (5000) and the 01:00 reading (5001).
    assert_eq!(lines[1], "2019-01-01 01:00,10001");
    assert_eq!(lines[72], "2019-01-04 00:00,10023");
    assert_eq!(std::fs::read_to_string(out.join("cleaning_report.jsonl")).unwrap(), "");
    assert!(out.join("manifest-ingest.json").exists());
}

#[test]
fn missing_file_exits_2_with_path() {
    let r = loadstab(&["stability", "--load", "/no/such/load.csv"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("/no/such/load.csv"));
}

#[test]
fn planted_gap_gives_one_cleaning_entry() {
    let dir = tempfile::tempdir().unwrap();
    let start = NaiveDate::from_ymd_opt(2019, 1, 1).unwrap();
    let gap = NaiveDate::from_ymd_opt(2019, 1, 2).unwrap().and_hms_opt(10, 30, 0).unwrap();
    let load = write_halfhourly(dir.path(), "sg.csv", start, 3, |_| 100.0, &[gap]);
    let out = dir.path().join("out");
    let r = loadstab(&["ingest", "--load", path_str(&load), "--format", "half-hourly", "--out-dir", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let report = std::fs::read_to_string(out.join("cleaning_report.jsonl")).unwrap();
    assert_eq!(report.lines().count(), 1);
    let entry: Value = serde_json::from_str(report.lines().next().unwrap()).unwrap();
    assert_eq!(entry["slot"], "2019-01-02 11:00");
    assert_eq!(entry["action"], "interpolate");
    assert_eq!(entry["replacement"], 200.0);
}

#[test]
fn constant_data_is_stable_with_zero_delta() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "flat.csv", &constant_series(2018, 2019, 750.0));
    let out = dir.path().join("out");
    let r = loadstab(&["stability", "--load", path_str(&load), "--threshold", "0.5", "--out-dir", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let delta = std::fs::read_to_string(out.join("delta.csv")).unwrap();
    for line in delta.lines().skip(1) {
        assert!(line.split(',').skip(1).all(|v| v == "0"), "{line}");
    }
    let summary = json(&out.join("stability.json"));
    assert_eq!(summary["overall_delta"], 0.0);
    assert_eq!(summary["stable"], true);
}

#[test]
fn threshold_miss_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "g.csv", &growth_series(2017, 2019, 4));
    let out = dir.path().join("out");
    let r = loadstab(&["stability", "--load", path_str(&load), "--threshold", "0.01", "--out-dir", path_str(&out)]);
    assert_eq!(r.status.code(), Some(1), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(json(&out.join("stability.json"))["stable"], false);
}

#[test]
fn short_constant_data_zero_mape() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "flat.csv", &constant_series(2017, 2019, 320.0));
    let out = dir.path().join("out");
    let r = loadstab(&[
        "forecast-short",
        "--load",
        path_str(&load),
        "--year",
        "2019",
        "--alpha",
        "0",
        "--beta",
        "0",
        "--out-dir",
        path_str(&out),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(json(&out.join("short_summary.json"))["mape"], 0.0);
    assert_eq!(std::fs::read_to_string(out.join("short_daily_mape.csv")).unwrap().lines().count(), 366);
}

#[test]
fn short_requires_parameters_or_search() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "flat.csv", &constant_series(2018, 2019, 320.0));
    let r = loadstab(&["forecast-short", "--load", path_str(&load), "--year", "2019", "--alpha", "0.1"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn long_forecast_then_evaluate_agree() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "g.csv", &growth_series(2008, 2016, 21));
    let gdp = write_gdp(dir.path(), 2008, 2016);
    let out = dir.path().join("out");
    let r = loadstab(&[
        "forecast-long",
        "--load",
        path_str(&load),
        "--gdp",
        path_str(&gdp),
        "--target-year",
        "2016",
        "--plot-from",
        "2016-03-01",
        "--plot-to",
        "2016-03-07",
        "--out-dir",
        path_str(&out),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let summary = json(&out.join("long_evaluation.json"));
    assert_eq!(summary["spec"]["baseline_year"], 2012);
    assert_eq!(summary["fit"]["years"], serde_json::json!([2008, 2009, 2010, 2011]));
    let long_mape = summary["evaluation"]["hourly_mape"].as_f64().unwrap();
    assert!(long_mape > 0.0 && long_mape < 20.0, "{long_mape}");
    let plot = std::fs::read_to_string(out.join("long_plot.csv")).unwrap();
    assert_eq!(plot.lines().count(), 1 + 7 * 24);
    assert!(plot.starts_with("datetime,actual,forecast,base\n2016-03-01 01:00,"));

    let r = loadstab(&[
        "evaluate",
        "--load",
        path_str(&load),
        "--forecast",
        path_str(&out.join("long_forecast.csv")),
        "--out-dir",
        path_str(&out),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let eval = json(&out.join("evaluation.json"));
    assert_eq!(eval["slots"], 8784);
    assert_eq!(eval["missing_actual"], 0);
    // Forecast values are written to six digits, so agreement is to ~1e-5 relative.
    let m = eval["mape"].as_f64().unwrap();
    assert!((m - long_mape).abs() < 1e-3 * long_mape, "{m} vs {long_mape}");
}

#[test]
fn long_forecast_with_override_needs_no_gdp() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "g.csv", &growth_series(2014, 2016, 2));
    let out = dir.path().join("out");
    let args = [
        "forecast-long",
        "--load",
        path_str(&load),
        "--target-year",
        "2016",
        "--baseline-year",
        "2015",
        "--out-dir",
        path_str(&out),
    ];
    assert_eq!(loadstab(&args).status.code(), Some(2));
    let mut with_override = args.to_vec();
    with_override.extend(["--annual-override", "4.0e7"]);
    let r = loadstab(&with_override);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let summary = json(&out.join("long_evaluation.json"));
    assert_eq!(summary["annual_forecast"], 4.0e7);
    assert!(summary["fit"].is_null());
}

#[test]
fn config_file_with_flag_override_and_env() {
    let dir = tempfile::tempdir().unwrap();
    write_series(dir.path(), "flat.csv", &constant_series(2018, 2019, 10.0));
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[data]\ncountry = \"testland\"\nload = \"flat.csv\"\nout_dir = \"cfg_out\"\n\n[stability]\nthreshold = 1.0\nepsilon_step = 0.01\n",
    )
    .unwrap();
    let r = loadstab(&["stability", "--config", path_str(&cfg), "--epsilon-step", "0.002"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let summary = json(&dir.path().join("cfg_out/stability.json"));
    assert_eq!(summary["epsilon_step"], 0.002);
    assert_eq!(summary["threshold"], 1.0);

    let r = std::process::Command::new(env!("CARGO_BIN_EXE_loadstab"))
        .args(["ingest", "--out-dir", path_str(&dir.path().join("env_out"))])
        .env("LOADSTAB_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(json(&dir.path().join("env_out/ingest.json"))["country"] == "testland");
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[data]\nunknown_key = 3\n").unwrap();
    let r = loadstab(&["ingest", "--config", path_str(&cfg)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("bad.toml"));
}

#[test]
fn every_command_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let load = write_series(dir.path(), "g.csv", &growth_series(2008, 2016, 8));
    let gdp = write_gdp(dir.path(), 2008, 2016);
    let runs: Vec<Vec<String>> = vec![
        vec!["ingest".into()],
        vec!["stability".into()],
        vec!["forecast-long".into(), "--target-year".into(), "2016".into()],
        vec![
            "forecast-short".into(),
            "--year".into(),
            "2016".into(),
            "--alpha".into(),
            "0.2".into(),
            "--beta".into(),
            "0.1".into(),
        ],
    ];
    let mut snapshots = Vec::new();
    for attempt in 0..2 {
        let out = dir.path().join(format!("run{attempt}"));
        for args in &runs {
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.extend(["--load", path_str(&load), "--gdp", path_str(&gdp), "--out-dir", path_str(&out)]);
            let r = loadstab(&full);
            assert_eq!(r.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        }
        let forecast = out.join("long_forecast.csv");
        let r = loadstab(&[
            "evaluate",
            "--load",
            path_str(&load),
            "--forecast",
            path_str(&forecast),
            "--out-dir",
            path_str(&out),
        ]);
        assert_eq!(r.status.code(), Some(0));
        snapshots.push(data_files(&out));
    }
    assert!(snapshots[0].len() >= 17, "{:?}", snapshots[0].keys());
    assert_eq!(snapshots[0], snapshots[1]);
}

#[test]
fn hour_beginning_labels_shift_by_one_hour() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("entsoe.csv");
    let mut text = String::from("start,load\n");
    for h in 0..48 {
        let t = NaiveDate::from_ymd_opt(2020, 5, 4).unwrap().and_hms_opt(0, 0, 0).unwrap() + chrono::Duration::hours(h);
        text.push_str(&format!("{},{}\n", t.format("%Y-%m-%d %H:%M"), 1000 + h));
    }
    std::fs::write(&path, text).unwrap();
    let out = dir.path().join("out");
    let r = loadstab(&[
        "ingest",
        "--load",
        path_str(&path),
        "--hour-label",
        "beginning",
        "--timestamp-column",
        "start",
        "--demand-column",
        "load",
        "--out-dir",
        path_str(&out),
    ]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(out.join("hourly.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("2020-05-04 01:00,1000"));
    assert_eq!(csv.lines().count(), 49);
}
