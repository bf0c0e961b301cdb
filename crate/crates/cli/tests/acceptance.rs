//! Acceptance suite: one PASS / FAIL / SKIP line per criterion.
//!
//! Criteria that need the raw hourly demand data read it from
//! `LOADSTAB_DATA_DIR` and are skipped when it is absent. See the README
//! for the expected file names.

mod common;
#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use loadstab::calendar::YearRange;
use loadstab::ingest::{
    aggregate_full_years, clean_gaps, halfhourly_to_hourly, load_gdp_table, native_hourly_series, parse_load_csv,
    GapPolicy, GdpTable, HourLabel, LoadCsvSchema,
};
use loadstab::longterm::{fit_annual_model, run_long_term, ForecastSpec, LongTermOptions, SiSource, TrainingRule};
use loadstab::reference::{
    annual_demand_gdp, published_delta, published_epsilon_hat, published_mu, published_pearson,
    published_two_year_mape, singapore_gdp_vintages, stability_years, Country, SHORT_TERM_ALPHA, SHORT_TERM_BETA,
    SHORT_TERM_MAPE, SHORT_TERM_YEARS, SINGAPORE_LONG_TERM, SINGAPORE_OVERRIDE_2018_MAPE,
    SINGAPORE_OVERRIDE_2018_TOTAL, SINGAPORE_REGRESSIONS,
};
use loadstab::seasonality::{DayBasis, HourlyForm, SeasonalityIndexSet, SeasonalityOptions};
use loadstab::shortterm::{
    es_step, evaluate_day_ahead, grid_search, SeasonalFactors, SlotKey, SmoothingConfig, SmoothingState,
};
use loadstab::stability::{delta_table_from, stability_report, StabilityConfig, StabilityReport};
use loadstab::stats::{ols_fit, pearson, t_cdf};
use loadstab::synthetic::{planted_series, smoother_series, PlantedPattern, SmootherGenerator};
use loadstab::HourlyLoadSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Verdict::{Fail, Pass, Skip};

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

struct Suite {
    failures: usize,
    passes: usize,
    skips: usize,
}

impl Suite {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Verdict) {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Fail(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match v {
            Pass(d) => {
                self.passes += 1;
                ("PASS", d)
            }
            Fail(d) => {
                self.failures += 1;
                ("FAIL", d)
            }
            Skip(d) => {
                self.skips += 1;
                ("SKIP", d)
            }
        };
        println!("{tag}  {name}: {detail} [{secs:.2}s]");
    }
}

fn default_si(series: &HourlyLoadSeries, years: YearRange) -> SeasonalityIndexSet {
    SeasonalityIndexSet::compute(series, years, SeasonalityOptions::default()).unwrap()
}

fn max_si_diff(a: &SeasonalityIndexSet, b: &SeasonalityIndexSet) -> f64 {
    let mut worst = 0.0f64;
    for y in a.years().iter() {
        for m in 1..=12 {
            worst = worst.max((a.monthly.value(y, m).unwrap() - b.monthly.value(y, m).unwrap()).abs());
            for d in 1..=7 {
                worst = worst.max((a.weekday.value(y, m, d).unwrap() - b.weekday.value(y, m, d).unwrap()).abs());
                for h in 1..=24 {
                    let (x, z) = (a.hourly.value(y, m, d, h).unwrap(), b.hourly.value(y, m, d, h).unwrap());
                    worst = worst.max((x - z).abs());
                }
            }
        }
    }
    worst
}

fn max_slot_diff(a: &loadstab::stability::SlotTable, b: &loadstab::stability::SlotTable) -> f64 {
    a.0.iter().flatten().zip(b.0.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn constant_property() -> Verdict {
    let start = Instant::now();
    let year = common::constant_series(2019, 2019, 6400.0);
    assert_eq!(year.len(), 8760);
    let si = default_si(&year, YearRange::single(2019));
    let mut worst = 0.0f64;
    for m in 1..=12 {
        worst = worst.max((si.monthly.value(2019, m).unwrap() - 1.0).abs());
        for d in 1..=7 {
            worst = worst.max((si.weekday.value(2019, m, d).unwrap() - 1.0).abs());
            for h in 1..=24 {
                worst = worst.max((si.hourly.value(2019, m, d, h).unwrap() - 1.0).abs());
            }
        }
    }
    // ε̂ needs a pair of years: a second constant year.
    let two = common::constant_series(2018, 2019, 6400.0);
    let range = YearRange::new(2018, 2019).unwrap();
    let report = stability_report(&default_si(&two, range).hourly, range, &StabilityConfig::default()).unwrap();
    let eps = report.epsilon.max.max();
    let delta = report.delta.max();
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-12 && eps == 0.0 && delta == 0.0 && elapsed < Duration::from_secs(1),
        format!("max |SI-1| {worst:.1e}, max ε̂ {eps}, max δ {delta}, {:.3}s", elapsed.as_secs_f64()),
    )
}

fn scale_invariance() -> Verdict {
    let series = planted_series(2019, 2020, 3000.0, &PlantedPattern::random(99), 0.02, 100);
    let scaled = series.scaled(7.3);
    let range = YearRange::new(2019, 2020).unwrap();
    let (a, b) = (default_si(&series, range), default_si(&scaled, range));
    let cfg = StabilityConfig::default();
    let ra = stability_report(&a.hourly, range, &cfg).unwrap();
    let rb = stability_report(&b.hourly, range, &cfg).unwrap();
    let si = max_si_diff(&a, &b);
    let eps = max_slot_diff(&ra.epsilon.max, &rb.epsilon.max);
    let delta = max_slot_diff(&ra.delta, &rb.delta);
    verdict(si <= 1e-9 && eps <= 1e-9 && delta <= 1e-9, format!("max diff SI {si:.1e}, ε̂ {eps:.1e}, δ {delta:.1e}"))
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let series = planted_series(2015, 2017, 5000.0, &PlantedPattern::random(2024), 0.02, 2025);
    let years = [2015, 2016, 2017];
    let range = YearRange::new(2015, 2017).unwrap();
    let mut worst = 0.0f64;
    for day_basis in [DayBasis::ActualDays, DayBasis::Fixed365] {
        for form in [HourlyForm::Verbal, HourlyForm::Symbolic] {
            let set = SeasonalityIndexSet::compute(&series, range, SeasonalityOptions { day_basis, form }).unwrap();
            let o = support::oracle(&series, &years, day_basis, form);
            for &y in &years {
                for m in 1..=12u32 {
                    worst = worst.max((set.monthly.value(y, m).unwrap() - o.si1[&(y, m)]).abs());
                    for d in 1..=7u32 {
                        worst = worst.max((set.weekday.value(y, m, d).unwrap() - o.si2[&(y, m, d)]).abs());
                        for h in 1..=24u32 {
                            worst = worst.max((set.hourly.value(y, m, d, h).unwrap() - o.si3[&(y, m, d, h)]).abs());
                        }
                    }
                }
            }
        }
    }
    let cfg = StabilityConfig::default();
    let set = default_si(&series, range);
    let report = stability_report(&set.hourly, range, &cfg).unwrap();
    let o = support::oracle(&series, &years, DayBasis::ActualDays, HourlyForm::Verbal);
    let mut eps_worst = 0.0f64;
    for d in 1..=7u32 {
        for h in 1..=24u32 {
            let samples: Vec<Vec<f64>> =
                years.iter().map(|&y| (1..=12).map(|m| o.si3[&(y, m, d, h)]).collect()).collect();
            let mut max = 0.0f64;
            for i in 0..3 {
                for j in i + 1..3 {
                    max = max.max(support::scan_epsilon(&samples[i], &samples[j], cfg.epsilon_step, cfg.alpha));
                }
            }
            eps_worst = eps_worst.max((report.epsilon.max.get(d, h) - max).abs());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-9 && eps_worst <= cfg.epsilon_step + 1e-12 && elapsed < Duration::from_secs(30),
        format!(
            "max SI diff {worst:.1e} (4 modes), max ε̂ diff {eps_worst:.4} (step {}), {:.2}s",
            cfg.epsilon_step,
            elapsed.as_secs_f64()
        ),
    )
}

fn stats_kernel() -> Verdict {
    let mut cdf_worst = 0.0f64;
    for df in [1.0, 5.0, 11.0, 30.0] {
        for i in -100..=100 {
            let t = f64::from(i) / 10.0;
            cdf_worst = cdf_worst.max((t_cdf(t, df).unwrap() - support::quadrature_t_cdf(t, df)).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut ols_worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(4..=15);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..150.0)).collect();
        let (a, b) = (rng.gen_range(-1e3..1e3), rng.gen_range(-20.0..20.0));
        let y: Vec<f64> = x.iter().map(|xi| a + b * xi + rng.gen_range(-30.0..30.0)).collect();
        let fit = ols_fit(&x, &y).unwrap();
        let oracle = support::normal_equations_fit(&x, &y);
        let got = [fit.intercept, fit.slope, fit.se_intercept, fit.se_slope, fit.r_squared];
        let want = [oracle.0, oracle.1, oracle.2, oracle.3, oracle.4];
        for (g, w) in got.iter().zip(want) {
            ols_worst = ols_worst.max((g - w).abs() / w.abs().max(1e-300));
        }
    }
    verdict(
        cdf_worst <= 1e-8 && ols_worst <= 1e-10,
        format!(
            "t_cdf max error {cdf_worst:.1e} over 804 points; OLS max relative error {ols_worst:.1e} over 20 fixtures"
        ),
    )
}

fn wavy_factors() -> SeasonalFactors {
    let mut f = SeasonalFactors::ones();
    for d in 0..7 {
        for h in 0..24 {
            f.hour[d][h] = 1.0 + 0.2 * ((h as f64 - 6.0) / 24.0 * std::f64::consts::TAU).sin() + 0.01 * d as f64;
        }
        f.weekday[d] = if d >= 5 { 0.93 } else { 1.02 };
    }
    for m in 0..12 {
        f.month[m] = 1.0 + 0.05 * (m as f64 / 12.0 * std::f64::consts::TAU).cos();
    }
    f
}

fn smoother_self_consistency() -> Verdict {
    let generator = SmootherGenerator {
        alpha: 0.30,
        beta: 0.10,
        factors: wavy_factors(),
        level: 5000.0,
        trend: 0.0,
        shock: 0.02,
        shocks_from: 2018,
    };
    let series = smoother_series(2017, 2018, &generator, 7);
    let template = SmoothingConfig::new(0.0, 0.0, wavy_factors());
    let best = grid_search(&series, &template, YearRange::single(2018)).unwrap();

    let quiet = SmootherGenerator { trend: 3.0, shock: 0.0, ..generator };
    let clean = smoother_series(2018, 2018, &quiet, 0);
    let cfg = SmoothingConfig::new(0.30, 0.10, wavy_factors());
    let keys: Vec<SlotKey> = (0..clean.len()).map(|i| SlotKey::from(clean.slot_at(i))).collect();
    let obs: Vec<f64> = clean.values().iter().map(|v| v.unwrap()).collect();
    let mut state = SmoothingState::initialize(obs[0], keys[0], &cfg).unwrap();
    let mut worst = 0.0f64;
    for t in 1..obs.len() - 1 {
        let (next, forecast) = es_step(&state, obs[t], keys[t], keys[t + 1], &cfg).unwrap();
        if t >= 100 {
            worst = worst.max((forecast - obs[t + 1]).abs() / next.level);
        }
        state = next;
    }
    verdict(
        (best.alpha, best.beta) == (0.30, 0.10) && worst < 1e-6,
        format!(
            "grid picked ({}, {}), MAPE {:.4}%; max one-step error / level after warm-up {worst:.1e}",
            best.alpha, best.beta, best.mape
        ),
    )
}

fn pearson_correlations() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for c in Country::ALL {
        let rows = annual_demand_gdp(c);
        let x: Vec<f64> = rows.iter().map(|r| r.gdp_usd).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.demand_twh).collect();
        let r = pearson(&x, &y).unwrap();
        ok &= (r - published_pearson(c)).abs() <= 0.002;
        parts.push(format!("{c} {r:.4} (ref {})", published_pearson(c)));
    }
    verdict(ok, parts.join(", "))
}

fn published_delta_consistency() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for c in Country::ALL {
        let delta = delta_table_from(&published_epsilon_hat(c), &published_mu(c)).unwrap();
        let reference = published_delta(c).overall.unwrap()[9];
        let diff = (delta.overall_mean() - reference).abs();
        ok &= diff < 0.02;
        parts.push(format!("{c} {:.3} vs {reference}", delta.overall_mean()));
    }
    verdict(ok, format!("overall δ from published ε̂/μ: {}", parts.join(", ")))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let load = common::write_series(dir.path(), "load.csv", &common::growth_series(2008, 2016, 5));
    let gdp = common::write_gdp(dir.path(), 2008, 2016);
    let commands: [&[&str]; 4] = [
        &["ingest"],
        &["stability", "--threshold", "50"],
        &["forecast-long", "--target-year", "2016"],
        &["forecast-short", "--year", "2016", "--alpha", "0.2", "--beta", "0.05"],
    ];
    let mut snapshots = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        for cmd in commands {
            let mut args = cmd.to_vec();
            args.extend(["--load", common::path_str(&load), "--gdp", common::path_str(&gdp)]);
            args.extend(["--out-dir", common::path_str(&out)]);
            let r = common::loadstab(&args);
            if r.status.code() != Some(0) {
                return Fail(format!("{cmd:?} exited {:?}: {}", r.status.code(), String::from_utf8_lossy(&r.stderr)));
            }
        }
        let forecast = out.join("long_forecast.csv");
        let r = common::loadstab(&[
            "evaluate",
            "--load",
            common::path_str(&load),
            "--forecast",
            common::path_str(&forecast),
            "--out-dir",
            common::path_str(&out),
        ]);
        if r.status.code() != Some(0) {
            return Fail(format!("evaluate exited {:?}", r.status.code()));
        }
        snapshots.push(common::data_files(&out));
    }
    let differing: Vec<&String> =
        snapshots[0].iter().filter(|(k, v)| snapshots[1].get(*k) != Some(v)).map(|(k, _)| k).collect();
    verdict(
        differing.is_empty() && snapshots[0].len() == snapshots[1].len(),
        format!("{} data files from 5 commands byte-identical across two runs", snapshots[0].len()),
    )
}

fn full_scale_timing() -> Verdict {
    let start = Instant::now();
    let series = planted_series(2004, 2022, 5500.0, &PlantedPattern::random(7), 0.03, 8);
    let all = YearRange::new(2004, 2022).unwrap();
    let si = default_si(&series, all);
    let report = stability_report(&si.hourly, all, &StabilityConfig::default()).unwrap();
    let stability_secs = start.elapsed().as_secs_f64();

    let factors = SeasonalFactors::from_indices(&default_si(&series, YearRange::new(2004, 2017).unwrap())).unwrap();
    let template = SmoothingConfig::new(0.0, 0.0, factors);
    let window = YearRange::new(2018, 2022).unwrap();
    let grid = grid_search(&series, &template, window).unwrap();
    let elapsed = start.elapsed();
    verdict(
        report.epsilon.pairs == 171 && elapsed < Duration::from_secs(300),
        format!(
            "19 years: {} pairs × 168 slots in {stability_secs:.1}s; 101² grid over {window} picked ({}, {}); total {:.1}s",
            report.epsilon.pairs,
            grid.alpha,
            grid.beta,
            elapsed.as_secs_f64()
        ),
    )
}

// Dataset-conditional criteria.

fn data_dir() -> Option<PathBuf> {
    std::env::var_os("LOADSTAB_DATA_DIR").map(PathBuf::from).filter(|p| p.is_dir())
}

/// `<country>_hourly.csv` (hour-ending `datetime,mw`) or
/// `<country>_halfhourly.csv` (half-hourly readings, summed per hour).
fn dataset(country: Country) -> Option<std::result::Result<HourlyLoadSeries, String>> {
    let dir = data_dir()?;
    let hourly = dir.join(format!("{country}_hourly.csv"));
    let half = dir.join(format!("{country}_halfhourly.csv"));
    let (path, half_hourly) = if hourly.exists() {
        (hourly, false)
    } else if half.exists() {
        (half, true)
    } else {
        return None;
    };
    let load = || -> loadstab::Result<HourlyLoadSeries> {
        let file = File::open(&path).map_err(|e| loadstab::Error::io(&path, e))?;
        let records = parse_load_csv(file, &LoadCsvSchema::default())?.into_strict()?;
        let raw = if half_hourly {
            halfhourly_to_hourly(&records, country.name())?
        } else {
            native_hourly_series(&records, country.name(), HourLabel::Ending)?
        };
        Ok(clean_gaps(&raw, &GapPolicy::default())?.0)
    };
    Some(load().map_err(|e| e.to_string()))
}

fn gdp_for(country: Country) -> Option<GdpTable> {
    let path = data_dir()?.join(format!("{country}_gdp.csv"));
    match File::open(&path) {
        Ok(f) => load_gdp_table(f, country.name()).ok(),
        Err(_) if country == Country::Singapore => Some(singapore_gdp_vintages()),
        Err(_) => None,
    }
}

macro_rules! need {
    ($country:expr) => {
        match dataset($country) {
            None => return Skip(format!("no {} load data in LOADSTAB_DATA_DIR", $country)),
            Some(Err(e)) => return Fail(format!("loading {} data: {e}", $country)),
            Some(Ok(s)) => s,
        }
    };
}

const MODES: [(DayBasis, HourlyForm); 4] = [
    (DayBasis::ActualDays, HourlyForm::Verbal),
    (DayBasis::ActualDays, HourlyForm::Symbolic),
    (DayBasis::Fixed365, HourlyForm::Verbal),
    (DayBasis::Fixed365, HourlyForm::Symbolic),
];

fn stability_years_of(country: Country) -> YearRange {
    let (a, b) = stability_years(country);
    YearRange::new(a, b).unwrap()
}

/// The seasonality mode whose μ table is closest to the published one.
fn best_mode(series: &HourlyLoadSeries, country: Country) -> (SeasonalityOptions, f64) {
    let published = published_mu(country);
    MODES
        .iter()
        .map(|&(day_basis, form)| {
            let opts = SeasonalityOptions { day_basis, form };
            let si = SeasonalityIndexSet::compute(series, stability_years_of(country), opts).unwrap();
            let mu = loadstab::stability::SlotTable(*si.hourly.mu());
            (opts, max_slot_diff(&mu, &published))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

fn stability_with(series: &HourlyLoadSeries, country: Country, opts: SeasonalityOptions) -> StabilityReport {
    let years = stability_years_of(country);
    let si = SeasonalityIndexSet::compute(series, years, opts).unwrap();
    stability_report(&si.hourly, years, &StabilityConfig::default()).unwrap()
}

fn singapore_mu(series: &HourlyLoadSeries) -> Verdict {
    let (opts, diff) = best_mode(series, Country::Singapore);
    verdict(diff <= 0.002, format!("max |μ − ref| {diff:.4} with {:?} / {:?}", opts.day_basis, opts.form))
}

fn singapore_delta(series: &HourlyLoadSeries) -> Verdict {
    let (opts, _) = best_mode(series, Country::Singapore);
    let r = stability_with(series, Country::Singapore, opts);
    let reference = published_delta(Country::Singapore).overall.unwrap();
    let got = [r.delta.overall_mean(), r.delta.weekday_mean(), r.delta.weekend_mean()];
    let want = [reference[9], reference[7], reference[8]];
    let ok = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 0.15);
    verdict(
        ok,
        format!(
            "overall {:.2} (ref {}), weekday {:.2} (ref {}), weekend {:.2} (ref {})",
            got[0], want[0], got[1], want[1], got[2], want[2]
        ),
    )
}

fn singapore_regression(series: &HourlyLoadSeries) -> Verdict {
    let annual = aggregate_full_years(series).unwrap();
    let gdp = gdp_for(Country::Singapore).unwrap();
    let fit = fit_annual_model(&annual, &gdp, 2013, 2013, TrainingRule::ActualGdpOnly).unwrap().model;
    let p = SINGAPORE_REGRESSIONS[0];
    let ok = (fit.intercept - p.intercept).abs() / p.intercept <= 0.005
        && (fit.slope - p.slope).abs() / p.slope <= 0.005
        && (fit.r_squared - p.r_squared).abs() <= 0.005;
    verdict(
        ok,
        format!(
            "intercept {:.0} (ref {}), slope {:.0} (ref {}), R² {:.3} (ref {})",
            fit.intercept, p.intercept, fit.slope, p.slope, fit.r_squared, p.r_squared
        ),
    )
}

fn long_options(series: &HourlyLoadSeries) -> LongTermOptions {
    LongTermOptions { seasonality: best_mode(series, Country::Singapore).0, training: TrainingRule::ActualGdpOnly }
}

fn singapore_backtests(series: &HourlyLoadSeries) -> Verdict {
    let annual = aggregate_full_years(series).unwrap();
    let gdp = gdp_for(Country::Singapore).unwrap();
    let options = long_options(series);
    let mut ok = true;
    let mut parts = Vec::new();
    for row in SINGAPORE_LONG_TERM {
        let spec = ForecastSpec::five_year_ahead(row.year, SiSource::BaselineYearSpecific);
        let run = run_long_term(series, &annual, Some(&gdp), &spec, options, None).unwrap();
        let Some(e) = run.evaluation else {
            return Fail(format!("no actuals for {}", row.year));
        };
        ok &= (e.yearly_pct_error - row.yearly_error).abs() <= 0.3 && (e.hourly_mape - row.hourly_mape).abs() <= 0.3;
        parts.push(format!("{} {:.2}/{:.2}", row.year, e.yearly_pct_error, e.hourly_mape));
    }
    verdict(ok, format!("(yearly error / hourly MAPE) {}", parts.join(", ")))
}

fn singapore_override(series: &HourlyLoadSeries) -> Verdict {
    let annual = aggregate_full_years(series).unwrap();
    let spec = ForecastSpec::five_year_ahead(2018, SiSource::BaselineYearSpecific);
    let run =
        run_long_term(series, &annual, None, &spec, long_options(series), Some(SINGAPORE_OVERRIDE_2018_TOTAL)).unwrap();
    let m = run.evaluation.unwrap().hourly_mape;
    verdict(
        (m - SINGAPORE_OVERRIDE_2018_MAPE).abs() <= 0.3,
        format!("2018 hourly MAPE {m:.2} (ref {SINGAPORE_OVERRIDE_2018_MAPE})"),
    )
}

fn two_year_ahead(country: Country) -> Verdict {
    let series = need!(country);
    let Some(gdp) = gdp_for(country) else {
        return Skip(format!("no {country}_gdp.csv in LOADSTAB_DATA_DIR"));
    };
    let annual = aggregate_full_years(&series).unwrap();
    let spec = ForecastSpec {
        target_year: 2019,
        baseline_year: 2017,
        gdp_report_year: 2017,
        si_source: SiSource::BaselineYearSpecific,
    };
    let run = run_long_term(&series, &annual, Some(&gdp), &spec, LongTermOptions::default(), None).unwrap();
    let m = run.evaluation.unwrap().hourly_mape;
    let reference = published_two_year_mape(country).unwrap();
    verdict((m - reference).abs() <= 0.5, format!("2019 hourly MAPE {m:.2} (ref {reference})"))
}

fn appendix_delta(country: Country) -> Verdict {
    let series = need!(country);
    let r = stability_with(&series, country, SeasonalityOptions::default());
    let reference = published_delta(country).overall.unwrap()[9];
    let got = r.delta.overall_mean();
    let stable = r.is_stable(5.0);
    verdict((got - reference).abs() <= 0.3, format!("overall δ {got:.2} (ref {reference}); stable at 5%: {stable}"))
}

fn short_term(series: &HourlyLoadSeries) -> Verdict {
    let si = SeasonalityIndexSet::compute(series, YearRange::new(2004, 2017).unwrap(), SeasonalityOptions::default())
        .unwrap();
    let template = SmoothingConfig::new(0.0, 0.0, SeasonalFactors::from_indices(&si).unwrap());
    let window = YearRange::new(SHORT_TERM_YEARS[0], SHORT_TERM_YEARS[4]).unwrap();
    let best = grid_search(series, &template, window).unwrap();
    let cfg = SmoothingConfig { alpha: best.alpha, beta: best.beta, ..template };
    let result = evaluate_day_ahead(series, &cfg, window).unwrap();
    let reference = SHORT_TERM_MAPE[0].1;
    let mut ok = (best.alpha, best.beta) == (SHORT_TERM_ALPHA, SHORT_TERM_BETA);
    let mut parts = Vec::new();
    for ((y, m), r) in result.per_year.iter().zip(reference) {
        ok &= (m - r).abs() <= 0.4;
        parts.push(format!("{y} {m:.2} (ref {r})"));
    }
    verdict(
        ok,
        format!(
            "grid ({}, {}) vs ref ({SHORT_TERM_ALPHA}, {SHORT_TERM_BETA}); {}",
            best.alpha,
            best.beta,
            parts.join(", ")
        ),
    )
}

fn main() {
    let mut suite = Suite { failures: 0, passes: 0, skips: 0 };
    println!("acceptance suite");
    suite.run("constant-demand year gives unit indices and zero δ", constant_property);
    suite.run("scale invariance ×7.3", scale_invariance);
    suite.run("brute-force oracle equivalence on planted 3-year data", oracle_equivalence);
    suite.run("statistics kernel: t CDF and OLS", stats_kernel);
    suite.run("smoother self-consistency", smoother_self_consistency);
    suite.run("load–GDP Pearson correlations", pearson_correlations);
    suite.run("published δ consistent with published ε̂ and μ", published_delta_consistency);
    suite.run("end-to-end CLI determinism", determinism);
    suite.run("full-scale run under five minutes", full_scale_timing);

    let singapore = dataset(Country::Singapore);
    let sg = |f: fn(&HourlyLoadSeries) -> Verdict| -> Box<dyn FnOnce() -> Verdict> {
        match &singapore {
            None => Box::new(|| Skip("no singapore load data in LOADSTAB_DATA_DIR".into())),
            Some(Err(e)) => {
                let e = e.clone();
                Box::new(move || Fail(format!("loading singapore data: {e}")))
            }
            Some(Ok(s)) => Box::new(move || f(s)),
        }
    };
    suite.run("Singapore mean hourly index μ within ±0.002", sg(singapore_mu));
    suite.run("Singapore overall / weekday / weekend δ within ±0.15 pp", sg(singapore_delta));
    suite.run("Singapore base-2013 load–GDP regression", sg(singapore_regression));
    suite.run("Singapore five-year-ahead backtests 2017–2022", sg(singapore_backtests));
    suite.run("Singapore 2018 forecast from the utility's annual total", sg(singapore_override));
    suite.run("Belgium two-year-ahead 2019 MAPE", || two_year_ahead(Country::Belgium));
    suite.run("Bulgaria two-year-ahead 2019 MAPE", || two_year_ahead(Country::Bulgaria));
    suite.run("Belgium overall δ 2006–2017", || appendix_delta(Country::Belgium));
    suite.run("Bulgaria overall δ 2006–2017", || appendix_delta(Country::Bulgaria));
    suite.run("Singapore day-ahead grid search and yearly MAPE 2018–2022", sg(short_term));

    println!("{} passed, {} failed, {} skipped", suite.passes, suite.failures, suite.skips);
    if suite.failures > 0 {
        std::process::exit(1);
    }
}
