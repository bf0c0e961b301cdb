//! Annual forecast from a GDP regression, spread over the hours of the
//! target year with baseline-year seasonality indices.

use std::collections::BTreeMap;

use chrono::{Datelike, Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::calendar::{days_in_year, CalendarSlot, YearRange};
use crate::error::{Error, Result};
use crate::ingest::{GdpFlag, GdpTable};
use crate::seasonality::{SeasonalityIndexSet, SeasonalityOptions};
use crate::series::{AnnualLoadSeries, HourlyLoadSeries};
use crate::stats::{ols_fit, LinearModel};

/// Which seasonality indices shape the hourly forecast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiSource {
    /// SI¹, SI² and SI³ of the baseline year itself.
    #[default]
    BaselineYearSpecific,
    /// ŚI¹_m, ŚI²_d and μ^{d,h} over the training window.
    OverallTrainingMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForecastSpec {
    pub target_year: i32,
    pub baseline_year: i32,
    /// GDP report vintage used for both training and prediction.
    pub gdp_report_year: i32,
    pub si_source: SiSource,
}

impl ForecastSpec {
    /// Five-year-ahead setup: baseline and GDP vintage four years before
    /// the target.
    pub fn five_year_ahead(target_year: i32, si_source: SiSource) -> Self {
        ForecastSpec { target_year, baseline_year: target_year - 4, gdp_report_year: target_year - 4, si_source }
    }

    pub fn validate(&self) -> Result<()> {
        if self.baseline_year >= self.target_year {
            return Err(Error::Config(format!(
                "baseline year {} must precede target year {}",
                self.baseline_year, self.target_year
            )));
        }
        Ok(())
    }
}

/// Which years up to the baseline enter the annual regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingRule {
    /// Years whose GDP is an actual in the report vintage.
    #[default]
    ActualGdpOnly,
    /// Every year through the baseline, whatever the vintage flag.
    ThroughBaseline,
}

/// Training data and fitted model of the annual regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualFit {
    pub model: LinearModel,
    pub report_year: i32,
    pub years: Vec<i32>,
    pub gdp: Vec<f64>,
    pub load: Vec<f64>,
}

/// Regress annual load on GDP for the years of `annual` up to the
/// baseline, taking GDP from the `report_year` vintage.
pub fn fit_annual_model(
    annual: &AnnualLoadSeries,
    gdp: &GdpTable,
    baseline_year: i32,
    report_year: i32,
    rule: TrainingRule,
) -> Result<AnnualFit> {
    let mut years = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&year, &total) in annual.totals.range(..=baseline_year) {
        let x = gdp.get(report_year, year).ok_or(Error::MissingGdp { report: report_year, target: year })?;
        if rule == TrainingRule::ActualGdpOnly && gdp.flag(report_year, year) != Some(GdpFlag::Actual) {
            continue;
        }
        years.push(year);
        xs.push(x);
        ys.push(total);
    }
    if years.len() < 3 {
        return Err(Error::Input(format!("{} training year(s) up to {baseline_year}; need at least 3", years.len())));
    }
    let model = ols_fit(&xs, &ys)?;
    Ok(AnnualFit { model, report_year, years, gdp: xs, load: ys })
}

pub fn predict_annual(model: &LinearModel, gdp: &GdpTable, spec: &ForecastSpec) -> Result<f64> {
    let x = gdp
        .get(spec.gdp_report_year, spec.target_year)
        .ok_or(Error::MissingGdp { report: spec.gdp_report_year, target: spec.target_year })?;
    Ok(model.predict(x))
}

/// Hourly forecast laid out on the target year's civil calendar.
///
/// The base divides the annual total by 365·24 even in leap years, so a
/// leap target year sums to about 366/365 of the annual forecast.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyForecast {
    pub spec: ForecastSpec,
    pub annual_total: f64,
    pub deseasonalized_base: f64,
    values: Vec<f64>,
}

impl HourlyForecast {
    pub fn target_year(&self) -> i32 {
        self.spec.target_year
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn slot_at(&self, index: usize) -> CalendarSlot {
        let jan1 = NaiveDate::from_ymd_opt(self.spec.target_year, 1, 1).unwrap();
        CalendarSlot::new(jan1 + Duration::days((index / 24) as i64), (index % 24) as u32 + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CalendarSlot, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.slot_at(i), v))
    }

    pub fn get(&self, slot: &CalendarSlot) -> Option<f64> {
        if slot.year != self.spec.target_year {
            return None;
        }
        let day = slot.date().ordinal0() as usize;
        self.values.get(day * 24 + slot.hour as usize - 1).copied()
    }
}

/// Product SI¹·SI²·SI³ (or the overall means) for every hour of `target_year`.
pub fn si_products(
    si: &SeasonalityIndexSet,
    source: SiSource,
    baseline_year: i32,
    target_year: i32,
) -> Result<Vec<f64>> {
    if source == SiSource::BaselineYearSpecific && !si.years().contains(baseline_year) {
        return Err(Error::MissingSi(format!("baseline year {baseline_year} outside index range {}", si.years())));
    }
    let jan1 = NaiveDate::from_ymd_opt(target_year, 1, 1)
        .ok_or_else(|| Error::Config(format!("invalid target year {target_year}")))?;
    let days = days_in_year(target_year) as usize;
    let mut out = Vec::with_capacity(days * 24);
    for k in 0..days {
        let date = jan1 + Duration::days(k as i64);
        let (m, d) = (date.month(), date.weekday().number_from_monday());
        for h in 1..=24 {
            let product = match source {
                SiSource::BaselineYearSpecific => {
                    let y = baseline_year;
                    match (si.monthly.value(y, m), si.weekday.value(y, m, d), si.hourly.value(y, m, d, h)) {
                        (Some(a), Some(b), Some(c)) => a * b * c,
                        _ => return Err(Error::MissingSi(format!("{y}-{m:02} weekday {d} hour {h}"))),
                    }
                }
                SiSource::OverallTrainingMean => {
                    si.monthly.overall(m).unwrap()
                        * si.weekday.overall(d).unwrap()
                        * si.hourly.mean_by_slot(d, h).unwrap()
                }
            };
            out.push(product);
        }
    }
    Ok(out)
}

pub fn disaggregate_hourly(
    annual_forecast: f64,
    si: &SeasonalityIndexSet,
    spec: &ForecastSpec,
) -> Result<HourlyForecast> {
    spec.validate()?;
    if !annual_forecast.is_finite() {
        return Err(Error::Domain(format!("annual forecast {annual_forecast} is not finite")));
    }
    let base = annual_forecast / (365.0 * 24.0);
    let values =
        si_products(si, spec.si_source, spec.baseline_year, spec.target_year)?.into_iter().map(|p| base * p).collect();
    Ok(HourlyForecast { spec: *spec, annual_total: annual_forecast, deseasonalized_base: base, values })
}

/// Disaggregate a caller-supplied annual total instead of the regression.
pub fn external_annual_override(total: f64, si: &SeasonalityIndexSet, spec: &ForecastSpec) -> Result<HourlyForecast> {
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Config(format!("annual override must be positive, got {total}")));
    }
    disaggregate_hourly(total, si, spec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    pub year: i32,
    pub actual_total: f64,
    pub forecast_total: f64,
    pub yearly_pct_error: f64,
    pub hourly_mape: f64,
    pub per_month_mape: BTreeMap<u32, f64>,
    pub slots: usize,
    /// Slots with zero actual demand, left out of the MAPE.
    pub excluded_zero_slots: usize,
}

/// Mean of |a − f|/a·100 over slots with a > 0, plus the count skipped.
pub fn mape(actual: &[f64], forecast: &[f64]) -> (f64, usize) {
    let mut sum = 0.0;
    let mut n = 0usize;
    let mut skipped = 0usize;
    for (&a, &f) in actual.iter().zip(forecast) {
        if a == 0.0 {
            skipped += 1;
            continue;
        }
        sum += ((a - f) / a).abs();
        n += 1;
    }
    let value = if n == 0 { f64::NAN } else { 100.0 * sum / n as f64 };
    (value, skipped)
}

pub fn evaluate_forecast(forecast: &HourlyForecast, actual: &HourlyLoadSeries) -> Result<EvaluationResult> {
    let year = forecast.target_year();
    let actual_values = actual.complete_year(year)?;
    if actual_values.len() != forecast.len() {
        return Err(Error::Input(format!(
            "forecast has {} slots but actual {year} has {}",
            forecast.len(),
            actual_values.len()
        )));
    }
    let actual_total: f64 = actual_values.iter().sum();
    if !(actual_total > 0.0) {
        return Err(Error::Domain(format!("actual demand of {year} sums to {actual_total}")));
    }
    let forecast_total = forecast.total();
    let (hourly_mape, excluded_zero_slots) = mape(&actual_values, forecast.values());

    let mut per_month_mape = BTreeMap::new();
    let mut from = 0usize;
    for m in 1..=12u32 {
        let hours = crate::calendar::days_in_month(year, m) as usize * 24;
        let (v, _) = mape(&actual_values[from..from + hours], &forecast.values()[from..from + hours]);
        per_month_mape.insert(m, v);
        from += hours;
    }
    Ok(EvaluationResult {
        year,
        actual_total,
        forecast_total,
        yearly_pct_error: 100.0 * (actual_total - forecast_total).abs() / actual_total,
        hourly_mape,
        per_month_mape,
        slots: actual_values.len(),
        excluded_zero_slots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct LongTermOptions {
    pub seasonality: SeasonalityOptions,
    pub training: TrainingRule,
}

/// Everything produced by one long-term backtest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongTermRun {
    pub spec: ForecastSpec,
    pub training_years: YearRange,
    pub fit: Option<AnnualFit>,
    pub annual_forecast: f64,
    pub forecast: HourlyForecast,
    pub evaluation: Option<EvaluationResult>,
}

/// Fit, predict and disaggregate without lookahead: indices and their
/// overall means cover the series' first full year through the baseline.
///
/// With `annual_override` the regression is skipped. The forecast is
/// evaluated when the series contains the target year.
pub fn run_long_term(
    series: &HourlyLoadSeries,
    annual: &AnnualLoadSeries,
    gdp: Option<&GdpTable>,
    spec: &ForecastSpec,
    options: LongTermOptions,
    annual_override: Option<f64>,
) -> Result<LongTermRun> {
    spec.validate()?;
    let first =
        *series.full_years().first().ok_or_else(|| Error::Input("series contains no full calendar year".into()))?;
    let training_years = YearRange::new(first, spec.baseline_year)?;
    let si = SeasonalityIndexSet::compute(series, training_years, options.seasonality)?;

    let (fit, annual_forecast, forecast) = match annual_override {
        Some(total) => (None, total, external_annual_override(total, &si, spec)?),
        None => {
            let gdp = gdp.ok_or_else(|| Error::Config("GDP table required without an annual override".into()))?;
            let fit = fit_annual_model(annual, gdp, spec.baseline_year, spec.gdp_report_year, options.training)?;
            let total = predict_annual(&fit.model, gdp, spec)?;
            let forecast = disaggregate_hourly(total, &si, spec)?;
            (Some(fit), total, forecast)
        }
    };
    let evaluation = if series.full_years().contains(&spec.target_year) {
        Some(evaluate_forecast(&forecast, series)?)
    } else {
        None
    };
    Ok(LongTermRun { spec: *spec, training_years, fit, annual_forecast, forecast, evaluation })
}
