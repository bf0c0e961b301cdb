//! Fixture writers and process helpers for the CLI tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime};
use loadstab::report::hourly_series_csv;
use loadstab::synthetic::{planted_series, PlantedPattern};
use loadstab::{HourlyLoadSeries, UnitConvention};

pub fn loadstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loadstab")).args(args).env_remove("LOADSTAB_CONFIG").output().expect("binary runs")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub fn write_series(dir: &Path, name: &str, series: &HourlyLoadSeries) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, hourly_series_csv(series)).unwrap();
    path
}

/// Half-hourly readings for `days` days from `start`, stamped at interval
/// end (00:30 through 24:00), skipping timestamps in `drop`.
pub fn write_halfhourly(
    dir: &Path,
    name: &str,
    start: NaiveDate,
    days: i64,
    value: impl Fn(NaiveDateTime) -> f64,
    drop: &[NaiveDateTime],
) -> PathBuf {
    let mut out = String::from("datetime,mw\n");
    let mut t = start.and_hms_opt(0, 30, 0).unwrap();
    let end = (start + Duration::days(days)).and_hms_opt(0, 0, 0).unwrap();
    while t <= end {
        if !drop.contains(&t) {
            let _ = writeln!(out, "{},{}", t.format("%Y-%m-%d %H:%M"), value(t));
        }
        t += Duration::minutes(30);
    }
    let path = dir.join(name);
    std::fs::write(&path, out).unwrap();
    path
}

pub fn constant_series(first: i32, last: i32, v: f64) -> HourlyLoadSeries {
    let start = NaiveDate::from_ymd_opt(first, 1, 1).unwrap();
    let days: i64 = (first..=last).map(|y| i64::from(loadstab::calendar::days_in_year(y))).sum();
    HourlyLoadSeries::from_values("flat", UnitConvention::NativeHourly, start, vec![v; days as usize * 24]).unwrap()
}

/// Planted seasonal pattern with 3 % yearly growth.
pub fn growth_series(first: i32, last: i32, seed: u64) -> HourlyLoadSeries {
    let base = planted_series(first, last, 4000.0, &PlantedPattern::random(seed), 0.02, seed + 1);
    let values: Vec<f64> =
        base.iter().map(|(slot, v)| v.unwrap() * (1.0 + 0.03 * f64::from(slot.date().year() - first))).collect();
    HourlyLoadSeries::from_values("synthetic", UnitConvention::NativeHourly, base.first_day(), values).unwrap()
}

/// One vintage per report year, GDP growing 4 % a year; years before
/// the report year are actuals.
pub fn write_gdp(dir: &Path, first: i32, last: i32) -> PathBuf {
    let mut out = String::from("report_year,target_year,gdp,flag\n");
    for report in first..=last {
        for target in first..=last + 5 {
            let gdp = 100.0 * 1.04f64.powi(target - first) * (1.0 + 0.002 * f64::from(report - first));
            let flag = if target < report { "actual" } else { "forecast" };
            let _ = writeln!(out, "{report},{target},{gdp:.3},{flag}");
        }
    }
    let path = dir.join("gdp.csv");
    std::fs::write(&path, out).unwrap();
    path
}

/// Every output file except run manifests.
pub fn data_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.file_name().unwrap().to_string_lossy().starts_with("manifest-"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}
