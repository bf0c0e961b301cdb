//! Brute-force oracles shared by integration and acceptance tests. They
//! share no code with the library beyond its input types.
#![allow(dead_code)]

use std::collections::HashMap;

use chrono::{Datelike, Duration, NaiveDate};
use loadstab::seasonality::{DayBasis, HourlyForm};
use loadstab::series::HourlyLoadSeries;
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::gamma::ln_gamma;

/// SI tables keyed by (y, m), (y, m, d) and (y, m, d, h), plus overall means.
pub struct Oracle {
    pub si1: HashMap<(i32, u32), f64>,
    pub si2: HashMap<(i32, u32, u32), f64>,
    pub si3: HashMap<(i32, u32, u32, u32), f64>,
    pub overall1: HashMap<u32, f64>,
    pub overall2: HashMap<u32, f64>,
    pub mu: HashMap<(u32, u32), f64>,
}

pub fn oracle(series: &HourlyLoadSeries, years: &[i32], basis: DayBasis, form: HourlyForm) -> Oracle {
    let mut month_sum: HashMap<(i32, u32), f64> = HashMap::new();
    let mut month_days: HashMap<(i32, u32), f64> = HashMap::new();
    let mut year_sum: HashMap<i32, f64> = HashMap::new();
    let mut wd_sum: HashMap<(i32, u32, u32), f64> = HashMap::new();
    let mut wd_days: HashMap<(i32, u32, u32), f64> = HashMap::new();
    let mut hour_sum: HashMap<(i32, u32, u32, u32), f64> = HashMap::new();

    let mut date = series.first_day();
    let mut idx = 0;
    while date <= series.last_day() {
        let (y, m, d) = (date.year(), date.month(), date.weekday().number_from_monday());
        if years.contains(&y) {
            *month_days.entry((y, m)).or_default() += 1.0;
            *wd_days.entry((y, m, d)).or_default() += 1.0;
            for h in 1..=24u32 {
                let v = series.values()[idx + h as usize - 1].unwrap();
                *month_sum.entry((y, m)).or_default() += v;
                *year_sum.entry(y).or_default() += v;
                *wd_sum.entry((y, m, d)).or_default() += v;
                *hour_sum.entry((y, m, d, h)).or_default() += v;
            }
        }
        idx += 24;
        date += Duration::days(1);
    }

    let mut si1 = HashMap::new();
    for &y in years {
        let ndays = if NaiveDate::from_ymd_opt(y, 2, 29).is_some() { 366.0 } else { 365.0 };
        let basis_days = match basis {
            DayBasis::ActualDays => ndays,
            DayBasis::Fixed365 => 365.0,
        };
        for m in 1..=12 {
            let v = (month_sum[&(y, m)] / month_days[&(y, m)]) / (year_sum[&y] / basis_days);
            si1.insert((y, m), v);
        }
    }
    let overall1: HashMap<u32, f64> =
        (1..=12).map(|m| (m, years.iter().map(|&y| si1[&(y, m)]).sum::<f64>() / years.len() as f64)).collect();

    let mut si2 = HashMap::new();
    for &y in years {
        for m in 1..=12 {
            let month_avg = month_sum[&(y, m)] / month_days[&(y, m)];
            for d in 1..=7 {
                let day_avg = wd_sum[&(y, m, d)] / wd_days[&(y, m, d)];
                si2.insert((y, m, d), day_avg / (month_avg * overall1[&m]));
            }
        }
    }
    let overall2: HashMap<u32, f64> = (1..=7)
        .map(|d| {
            let vals: Vec<f64> = si2.iter().filter(|(k, _)| k.2 == d).map(|(_, v)| *v).collect();
            (d, vals.iter().sum::<f64>() / vals.len() as f64)
        })
        .collect();

    let mut si3 = HashMap::new();
    for &y in years {
        for m in 1..=12 {
            for d in 1..=7 {
                let n = wd_days[&(y, m, d)];
                let avg_all = wd_sum[&(y, m, d)] / (24.0 * n);
                for h in 1..=24 {
                    let avg_h = hour_sum[&(y, m, d, h)] / n;
                    let v = match form {
                        HourlyForm::Verbal => avg_h / (avg_all * overall1[&m] * overall2[&d]),
                        HourlyForm::Symbolic => avg_h * overall1[&m] * overall2[&d] / avg_all,
                    };
                    si3.insert((y, m, d, h), v);
                }
            }
        }
    }
    let mut mu = HashMap::new();
    for d in 1..=7 {
        for h in 1..=24 {
            let mut acc = 0.0;
            let mut n = 0.0;
            for &y in years {
                for m in 1..=12 {
                    acc += si3[&(y, m, d, h)];
                    n += 1.0;
                }
            }
            mu.insert((d, h), acc / n);
        }
    }
    Oracle { si1, si2, si3, overall1, overall2, mu }
}

/// Ascending ε scan with Welch statistics evaluated from scratch.
pub fn scan_epsilon(a: &[f64], b: &[f64], step: f64, alpha: f64) -> f64 {
    let stats = |x: &[f64]| {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
        (n, m, v)
    };
    let ((na, ma, va), (nb, mb, vb)) = (stats(a), stats(b));
    let se2 = va / na + vb / nb;
    let diff = ma - mb;
    if se2 == 0.0 {
        return (diff.abs() / step - 1e-9).ceil().max(0.0) * step;
    }
    let df = se2 * se2 / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    let t = StudentsT::new(0.0, 1.0, df).unwrap();
    let se = se2.sqrt();
    for k in 0..=1000u32 {
        let eps = f64::from(k) * step;
        let p_left = t.cdf((diff - eps) / se);
        let p_right = 1.0 - t.cdf((diff + eps) / se);
        if p_left < alpha && p_right < alpha {
            return eps;
        }
    }
    f64::INFINITY
}

/// Student-t CDF by Simpson quadrature of the density on [0, t].
pub fn quadrature_t_cdf(t: f64, df: f64) -> f64 {
    let log_norm = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    let density = |x: f64| (log_norm - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp();
    let n = 20_000;
    let h = t / n as f64;
    let mut acc = density(0.0) + density(t);
    for i in 1..n {
        acc += density(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 + acc * h / 3.0
}

/// (intercept, slope, se_intercept, se_slope, r²) from the 2×2 normal
/// equations solved by Cramer's rule.
pub fn normal_equations_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64, f64) {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let a = (sxx * sy - sx * sxy) / det;
    let b = (n * sxy - sx * sy) / det;
    let sse: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - a - b * xi).powi(2)).sum();
    let mean = sy / n;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let s2 = sse / (n - 2.0);
    let se_a = (s2 * sxx / det).sqrt();
    let se_b = (s2 * n / det).sqrt();
    (a, b, se_a, se_b, 1.0 - sse / sst)
}
