//! Triple-seasonal Holt-Winters smoothing with fixed seasonal factors,
//! evaluated as a rolling day-ahead forecast.
//!
//! Level and trend follow the usual multiplicative Holt-Winters recursion.
//! The hour-of-week, weekday and month factors come from seasonality
//! indices and stay constant unless a per-season γ is set.

use chrono::{Datelike, NaiveDate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calendar::{CalendarSlot, YearRange};
use crate::error::{Error, Result};
use crate::seasonality::SeasonalityIndexSet;
use crate::series::HourlyLoadSeries;

/// Seasonal periods in hours: day, week. The month season follows the
/// calendar rather than a fixed period.
pub const HOUR_PERIOD: usize = 24;
pub const WEEK_PERIOD: usize = 168;

/// Calendar coordinates that select the seasonal factors of one hour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotKey {
    pub month: u8,
    pub weekday: u8,
    pub hour: u8,
}

impl SlotKey {
    fn indices(self) -> (usize, usize, usize) {
        (self.month as usize - 1, self.weekday as usize - 1, self.hour as usize - 1)
    }
}

impl From<&CalendarSlot> for SlotKey {
    fn from(s: &CalendarSlot) -> Self {
        SlotKey { month: s.month as u8, weekday: s.weekday as u8, hour: s.hour as u8 }
    }
}

impl From<CalendarSlot> for SlotKey {
    fn from(s: CalendarSlot) -> Self {
        SlotKey::from(&s)
    }
}

/// Hour-of-week, weekday and month factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalFactors {
    /// Indexed `[weekday - 1][hour - 1]`.
    pub hour: [[f64; 24]; 7],
    pub weekday: [f64; 7],
    pub month: [f64; 12],
}

fn normalized<const N: usize>(values: [f64; N]) -> [f64; N] {
    let mean = values.iter().sum::<f64>() / N as f64;
    values.map(|v| v / mean)
}

impl SeasonalFactors {
    pub fn ones() -> Self {
        SeasonalFactors { hour: [[1.0; 24]; 7], weekday: [1.0; 7], month: [1.0; 12] }
    }

    /// μ^{d,h}, ŚI²_d and ŚI¹_m, each family scaled to mean 1.
    pub fn from_indices(si: &SeasonalityIndexSet) -> Result<Self> {
        let mu = si.hourly.mu();
        let flat: [f64; 168] = std::array::from_fn(|i| mu[i / 24][i % 24]);
        let flat = normalized(flat);
        let factors = SeasonalFactors {
            hour: std::array::from_fn(|d| std::array::from_fn(|h| flat[d * 24 + h])),
            weekday: normalized(*si.weekday.overall_all()),
            month: normalized(*si.monthly.overall_all()),
        };
        factors.validate()?;
        Ok(factors)
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.hour.iter().flatten().chain(&self.weekday).chain(&self.month);
        if let Some(v) = all.into_iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::Config(format!("seasonal factor {v} is not positive")));
        }
        Ok(())
    }

    #[inline]
    pub fn product(&self, key: SlotKey) -> f64 {
        let (m, d, h) = key.indices();
        self.hour[d][h] * self.weekday[d] * self.month[m]
    }
}

/// Per-season smoothing of the factors; all zero keeps them constant.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SeasonGammas {
    pub hour: f64,
    pub weekday: f64,
    pub month: f64,
}

impl SeasonGammas {
    pub fn is_zero(&self) -> bool {
        self.hour == 0.0 && self.weekday == 0.0 && self.month == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: SeasonGammas,
    pub factors: SeasonalFactors,
}

impl SmoothingConfig {
    pub fn new(alpha: f64, beta: f64, factors: SeasonalFactors) -> Self {
        SmoothingConfig { alpha, beta, gamma: SeasonGammas::default(), factors }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} outside [0, 1]")))
            }
        };
        unit("alpha", self.alpha)?;
        unit("beta", self.beta)?;
        unit("gamma.hour", self.gamma.hour)?;
        unit("gamma.weekday", self.gamma.weekday)?;
        unit("gamma.month", self.gamma.month)?;
        self.factors.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingState {
    pub level: f64,
    pub trend: f64,
    /// Observations assimilated so far.
    pub t: u64,
    pub factors: SeasonalFactors,
}

impl SmoothingState {
    /// L₀ = D₀ / S₀ and B₀ = 0 from the first observation.
    pub fn initialize(first: f64, key: SlotKey, config: &SmoothingConfig) -> Result<Self> {
        check_observation(first)?;
        Ok(SmoothingState {
            level: first / config.factors.product(key),
            trend: 0.0,
            t: 1,
            factors: config.factors.clone(),
        })
    }
}

fn check_observation(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("observation {d} is not positive")))
    }
}

/// Assimilate observation D_t at slot `current` and return the new state
/// with the one-step forecast for slot `next`.
pub fn es_step(
    state: &SmoothingState,
    observation: f64,
    current: SlotKey,
    next: SlotKey,
    config: &SmoothingConfig,
) -> Result<(SmoothingState, f64)> {
    check_observation(observation)?;
    let (alpha, beta) = (config.alpha, config.beta);
    let s = state.factors.product(current);
    let prior = state.level + state.trend;
    let level = prior + alpha * (observation / s - prior);
    let trend = state.trend + beta * (level - state.level - state.trend);
    let mut factors = state.factors.clone();
    if !config.gamma.is_zero() {
        let ratio = observation / level;
        let (m, d, h) = current.indices();
        let g = config.gamma;
        factors.hour[d][h] += g.hour * (ratio - factors.hour[d][h]);
        factors.weekday[d] += g.weekday * (ratio - factors.weekday[d]);
        factors.month[m] += g.month * (ratio - factors.month[m]);
    }
    let forecast = (level + trend) * factors.product(next);
    Ok((SmoothingState { level, trend, t: state.t + 1, factors }, forecast))
}

/// F_{t+k} = (L_t + k·B_t)·S(t+k) for k = 1..=calendar.len().
pub fn forecast_horizon(state: &SmoothingState, calendar: &[SlotKey]) -> Result<Vec<f64>> {
    if calendar.is_empty() {
        return Err(Error::Config("forecast horizon must be at least one step".into()));
    }
    Ok(calendar
        .iter()
        .enumerate()
        .map(|(i, &key)| (state.level + (i + 1) as f64 * state.trend) * state.factors.product(key))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyMape {
    pub date: NaiveDate,
    pub mape: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayAheadResult {
    pub years: YearRange,
    pub alpha: f64,
    pub beta: f64,
    /// MAPE over every forecast hour of the window.
    pub mape: f64,
    pub per_year: Vec<(i32, f64)>,
    pub daily: Vec<DailyMape>,
}

/// Observations and slot keys from the warm-up year through the window.
struct Run {
    start: NaiveDate,
    keys: Vec<SlotKey>,
    obs: Vec<f64>,
    /// Index of hour 1 of the first evaluated day.
    eval_from: usize,
}

impl Run {
    fn prepare(series: &HourlyLoadSeries, years: YearRange) -> Result<Self> {
        let warmup = years.first - 1;
        let mut obs = Vec::new();
        for y in warmup..=years.last {
            let values = series.complete_year(y).map_err(|e| match e {
                Error::PartialYear(_) if y == warmup => {
                    Error::Input(format!("day-ahead evaluation of {years} needs warm-up year {warmup}"))
                }
                other => other,
            })?;
            obs.extend(values);
        }
        if let Some(v) = obs.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::Domain(format!("observation {v} is not positive")));
        }
        let start = NaiveDate::from_ymd_opt(warmup, 1, 1).unwrap();
        let keys = (0..obs.len())
            .map(|i| {
                let date = start + chrono::Duration::days((i / 24) as i64);
                SlotKey {
                    month: date.month() as u8,
                    weekday: date.weekday().number_from_monday() as u8,
                    hour: (i % 24 + 1) as u8,
                }
            })
            .collect();
        let eval_from = crate::calendar::days_in_year(warmup) as usize * 24;
        Ok(Run { start, keys, obs, eval_from })
    }

    fn year_of_day(&self, day: usize) -> i32 {
        (self.start + chrono::Duration::days(day as i64)).year()
    }
}

/// Rolling day-ahead evaluation over `years`, warmed up on the year before.
///
/// The smoother starts at hour 1 of the warm-up year. At each midnight of
/// the window it forecasts the next 24 hours, then assimilates them.
pub fn evaluate_day_ahead(
    series: &HourlyLoadSeries,
    config: &SmoothingConfig,
    years: YearRange,
) -> Result<DayAheadResult> {
    config.validate()?;
    let run = Run::prepare(series, years)?;
    let errors = day_ahead_errors(&run, config)?;
    Ok(summarize(&run, config, years, &errors))
}

/// Day-ahead forecasts over a window, aligned with the actuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayAheadPath {
    /// First evaluated day; entries run hourly from its hour 1.
    pub start: NaiveDate,
    pub actual: Vec<f64>,
    pub forecast: Vec<f64>,
    /// Deseasonalised base L + k·B behind each forecast.
    pub base: Vec<f64>,
}

impl DayAheadPath {
    pub fn slot_at(&self, index: usize) -> CalendarSlot {
        CalendarSlot::new(self.start + chrono::Duration::days((index / 24) as i64), (index % 24 + 1) as u32)
    }
}

/// The forecasts scored by [`evaluate_day_ahead`].
pub fn day_ahead_path(series: &HourlyLoadSeries, config: &SmoothingConfig, years: YearRange) -> Result<DayAheadPath> {
    config.validate()?;
    let run = Run::prepare(series, years)?;
    let mut path = DayAheadPath {
        start: run.start + chrono::Duration::days((run.eval_from / 24) as i64),
        actual: run.obs[run.eval_from..].to_vec(),
        forecast: Vec::with_capacity(run.obs.len() - run.eval_from),
        base: Vec::with_capacity(run.obs.len() - run.eval_from),
    };
    walk_day_ahead(&run, config, |_, f, b| {
        path.forecast.push(f);
        path.base.push(b);
    })?;
    Ok(path)
}

/// Run the smoother through `run`, calling `visit(t, forecast, base)` for
/// every evaluated hour in order.
fn walk_day_ahead(run: &Run, config: &SmoothingConfig, mut visit: impl FnMut(usize, f64, f64)) -> Result<()> {
    let n = run.obs.len();
    let mut state = SmoothingState::initialize(run.obs[0], run.keys[0], config)?;
    let mut t = 1;
    while t < n {
        if t >= run.eval_from && t % 24 == 0 {
            let forecasts = forecast_horizon(&state, &run.keys[t..t + 24])?;
            for (k, f) in forecasts.into_iter().enumerate() {
                visit(t + k, f, state.level + (k + 1) as f64 * state.trend);
            }
        }
        let next = run.keys[(t + 1).min(n - 1)];
        state = es_step(&state, run.obs[t], run.keys[t], next, config)?.0;
        t += 1;
    }
    Ok(())
}

/// Absolute percentage errors of every evaluated hour.
fn day_ahead_errors(run: &Run, config: &SmoothingConfig) -> Result<Vec<f64>> {
    let mut errors = Vec::with_capacity(run.obs.len() - run.eval_from);
    walk_day_ahead(run, config, |t, f, _| {
        let a = run.obs[t];
        errors.push(((a - f) / a).abs());
    })?;
    Ok(errors)
}

fn summarize(run: &Run, config: &SmoothingConfig, years: YearRange, errors: &[f64]) -> DayAheadResult {
    let first_day = run.eval_from / 24;
    let daily: Vec<DailyMape> = errors
        .chunks_exact(24)
        .enumerate()
        .map(|(i, c)| DailyMape {
            date: run.start + chrono::Duration::days((first_day + i) as i64),
            mape: 100.0 * c.iter().sum::<f64>() / 24.0,
        })
        .collect();
    let per_year = years
        .iter()
        .map(|y| {
            let (sum, n) = errors
                .chunks_exact(24)
                .enumerate()
                .filter(|(i, _)| run.year_of_day(first_day + i) == y)
                .fold((0.0, 0usize), |(s, n), (_, c)| (s + c.iter().sum::<f64>(), n + 24));
            (y, 100.0 * sum / n as f64)
        })
        .collect();
    DayAheadResult {
        years,
        alpha: config.alpha,
        beta: config.beta,
        mape: 100.0 * errors.iter().sum::<f64>() / errors.len() as f64,
        per_year,
        daily,
    }
}

/// Day-ahead MAPE with constant factors, using a precomputed seasonal
/// product and deseasonalised observation per hour.
fn fast_mape(s: &[f64], y: &[f64], obs: &[f64], eval_from: usize, alpha: f64, beta: f64) -> f64 {
    let n = obs.len();
    let mut level = y[0];
    let mut trend = 0.0;
    let mut sum = 0.0;
    let mut count = 0usize;
    for t in 1..n {
        if t >= eval_from && t % 24 == 0 {
            for k in 0..24 {
                let f = (level + (k + 1) as f64 * trend) * s[t + k];
                let a = obs[t + k];
                sum += ((a - f) / a).abs();
            }
            count += 24;
        }
        let prior = level + trend;
        let new_level = prior + alpha * (y[t] - prior);
        trend += beta * (new_level - level - trend);
        level = new_level;
    }
    100.0 * sum / count as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub alpha: f64,
    pub beta: f64,
    pub mape: f64,
    pub window: YearRange,
}

/// Grid value i/100 for i in 0..=100.
pub fn grid_value(i: usize) -> f64 {
    i as f64 / 100.0
}

/// Exhaustive search of α, β ∈ {0.00, 0.01, …, 1.00} minimising the
/// day-ahead MAPE over `window`. Ties go to the smaller α, then β.
pub fn grid_search(
    series: &HourlyLoadSeries,
    template: &SmoothingConfig,
    window: YearRange,
) -> Result<GridSearchResult> {
    template.validate()?;
    let run = Run::prepare(series, window)?;
    let cells: Vec<(usize, usize)> = (0..=100).flat_map(|a| (0..=100).map(move |b| (a, b))).collect();

    let scores: Vec<f64> = if template.gamma.is_zero() {
        let s: Vec<f64> = run.keys.iter().map(|&k| template.factors.product(k)).collect();
        let y: Vec<f64> = run.obs.iter().zip(&s).map(|(d, s)| d / s).collect();
        cells
            .par_iter()
            .map(|&(a, b)| fast_mape(&s, &y, &run.obs, run.eval_from, grid_value(a), grid_value(b)))
            .collect()
    } else {
        cells
            .par_iter()
            .map(|&(a, b)| {
                let cfg = SmoothingConfig { alpha: grid_value(a), beta: grid_value(b), ..template.clone() };
                let errors = day_ahead_errors(&run, &cfg)?;
                Ok(100.0 * errors.iter().sum::<f64>() / errors.len() as f64)
            })
            .collect::<Result<_>>()?
    };

    // Cells are in (α, β) lexicographic order, so the first strict minimum wins ties.
    let mut best = 0;
    for (i, &v) in scores.iter().enumerate() {
        if v < scores[best] || (scores[best].is_nan() && !v.is_nan()) {
            best = i;
        }
    }
    let (a, b) = cells[best];
    Ok(GridSearchResult { alpha: grid_value(a), beta: grid_value(b), mape: scores[best], window })
}
