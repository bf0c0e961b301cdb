//! CSV and JSON emitters. Report numbers carry six significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::calendar::{hour_label, WEEKDAY_NAMES};
use crate::error::{Error, Result};
use crate::longterm::HourlyForecast;
use crate::seasonality::{BoxSummary, SeasonalityIndexSet};
use crate::series::HourlyLoadSeries;
use crate::stability::{SlotTable, StabilityReport};

/// `%g`-style formatting with six significant digits.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `v` rounded to six significant digits.
pub fn round_sig(v: f64) -> f64 {
    if v.is_finite() {
        fmt_sig(v).parse().unwrap_or(v)
    } else {
        v
    }
}

/// Round every float in a JSON tree to six significant digits.
pub fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let v = round_sig(n.as_f64().unwrap());
            serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&round_json(serde_json::to_value(value)?))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Rows hour 1:00..0:00, columns Monday..Sunday. With `aggregates`, adds
/// Weekday / Weekend / Week columns and an Overall row.
pub fn slot_table_csv(table: &SlotTable, aggregates: bool) -> String {
    let mut out = String::from("Time");
    for name in WEEKDAY_NAMES {
        out.push(',');
        out.push_str(name);
    }
    if aggregates {
        out.push_str(",Weekday,Weekend,Week");
    }
    out.push('\n');
    for h in 1..=24u32 {
        out.push_str(&hour_label(h));
        for d in 1..=7 {
            let _ = write!(out, ",{}", fmt_sig(table.get(d, h)));
        }
        if aggregates {
            let _ = write!(
                out,
                ",{},{},{}",
                fmt_sig(table.weekday_mean_at(h)),
                fmt_sig(table.weekend_mean_at(h)),
                fmt_sig(table.week_mean_at(h))
            );
        }
        out.push('\n');
    }
    if aggregates {
        out.push_str("Overall");
        for d in 1..=7 {
            let _ = write!(out, ",{}", fmt_sig(table.day_mean(d)));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt_sig(table.weekday_mean()),
            fmt_sig(table.weekend_mean()),
            fmt_sig(table.overall_mean())
        );
    }
    out
}

pub fn monthly_si_csv(si: &SeasonalityIndexSet) -> String {
    let mut out = String::from("year,month,si\n");
    for y in si.years().iter() {
        for m in 1..=12 {
            let _ = writeln!(out, "{y},{m},{}", fmt_sig(si.monthly.value(y, m).unwrap()));
        }
    }
    for m in 1..=12 {
        let _ = writeln!(out, "overall,{m},{}", fmt_sig(si.monthly.overall(m).unwrap()));
    }
    out
}

pub fn weekday_si_csv(si: &SeasonalityIndexSet) -> String {
    let mut out = String::from("year,month,weekday,si\n");
    for y in si.years().iter() {
        for m in 1..=12 {
            for d in 1..=7 {
                let _ = writeln!(out, "{y},{m},{d},{}", fmt_sig(si.weekday.value(y, m, d).unwrap()));
            }
        }
    }
    for d in 1..=7 {
        let _ = writeln!(out, "overall,,{d},{}", fmt_sig(si.weekday.overall(d).unwrap()));
    }
    out
}

pub fn hourly_si_csv(si: &SeasonalityIndexSet) -> String {
    let mut out = String::from("year,month,weekday,hour,si\n");
    for y in si.years().iter() {
        for m in 1..=12 {
            for d in 1..=7 {
                for h in 1..=24 {
                    let _ = writeln!(out, "{y},{m},{d},{h},{}", fmt_sig(si.hourly.value(y, m, d, h).unwrap()));
                }
            }
        }
    }
    out
}

#[derive(Serialize)]
struct HourlyRecord {
    year: i32,
    month: u32,
    weekday: u32,
    hour: u32,
    si: f64,
}

/// SI³ as a JSON array of records keyed by (year, month, weekday, hour).
pub fn hourly_si_json(si: &SeasonalityIndexSet) -> Result<String> {
    let mut records = Vec::with_capacity(si.years().len() * 12 * 168);
    for year in si.years().iter() {
        for month in 1..=12 {
            for weekday in 1..=7 {
                for hour in 1..=24 {
                    records.push(HourlyRecord {
                        year,
                        month,
                        weekday,
                        hour,
                        si: si.hourly.value(year, month, weekday, hour).unwrap(),
                    });
                }
            }
        }
    }
    let mut s = serde_json::to_string(&round_json(serde_json::to_value(records)?))?;
    s.push('\n');
    Ok(s)
}

pub fn boxplot_csv(boxes: &[BoxSummary]) -> String {
    let mut out = String::from("weekday,hour,n,min,q1,median,q3,max\n");
    for b in boxes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            WEEKDAY_NAMES[b.weekday as usize - 1],
            hour_label(b.hour),
            b.n,
            fmt_sig(b.min),
            fmt_sig(b.q1),
            fmt_sig(b.median),
            fmt_sig(b.q3),
            fmt_sig(b.max)
        );
    }
    out
}

#[derive(Serialize)]
struct StabilitySummary {
    years: String,
    pairs: usize,
    epsilon_step: f64,
    epsilon_cap: f64,
    alpha: f64,
    flavor: crate::stats::TestFlavor,
    capped_slots: Vec<(u32, u32)>,
    overall_delta: f64,
    weekday_delta: f64,
    weekend_delta: f64,
    overall_delta_of_mean: f64,
    max_epsilon_hat: f64,
    threshold: Option<f64>,
    stable: Option<bool>,
}

pub fn stability_json(report: &StabilityReport, threshold: Option<f64>) -> Result<String> {
    let eps = &report.epsilon;
    let capped_slots = (1..=7u32)
        .flat_map(|d| (1..=24u32).map(move |h| (d, h)))
        .filter(|&(d, h)| eps.capped[d as usize - 1][h as usize - 1])
        .collect();
    let summary = StabilitySummary {
        years: eps.years.to_string(),
        pairs: eps.pairs,
        epsilon_step: eps.config.epsilon_step,
        epsilon_cap: eps.config.epsilon_cap,
        alpha: eps.config.alpha,
        flavor: eps.config.flavor,
        capped_slots,
        overall_delta: report.delta.overall_mean(),
        weekday_delta: report.delta.weekday_mean(),
        weekend_delta: report.delta.weekend_mean(),
        overall_delta_of_mean: report.delta_of_mean.overall_mean(),
        max_epsilon_hat: eps.max.max(),
        threshold,
        stable: threshold.map(|t| report.is_stable(t)),
    };
    to_report_json(&summary)
}

/// Canonical hourly series: hour-ending timestamp and value, lossless.
pub fn hourly_series_csv(series: &HourlyLoadSeries) -> String {
    let mut out = String::with_capacity(series.len() * 24);
    out.push_str("datetime,mw\n");
    for (slot, v) in series.iter() {
        let ts = slot.hour_ending().format("%Y-%m-%d %H:%M");
        match v {
            Some(v) => {
                let _ = writeln!(out, "{ts},{v}");
            }
            None => {
                let _ = writeln!(out, "{ts},");
            }
        }
    }
    out
}

pub fn forecast_csv(forecast: &HourlyForecast) -> String {
    let mut out = String::from("slot,forecast\n");
    for (slot, v) in forecast.iter() {
        let _ = writeln!(out, "{slot},{}", fmt_sig(v));
    }
    out
}
