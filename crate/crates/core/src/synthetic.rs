//! Seeded synthetic load series for tests, demos and timing runs.

use chrono::{Datelike, Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calendar::days_in_year;
use crate::series::{HourlyLoadSeries, UnitConvention};
use crate::shortterm::{SeasonalFactors, SlotKey};

/// Multiplicative month, weekday and hour patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedPattern {
    pub month: [f64; 12],
    pub weekday: [f64; 7],
    /// Indexed `[weekday - 1][hour - 1]`.
    pub hour: [[f64; 24]; 7],
}

impl PlantedPattern {
    /// Month factors in [0.9, 1.1], weekday in [0.95, 1.05], hour in [0.8, 1.2].
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PlantedPattern {
            month: std::array::from_fn(|_| rng.gen_range(0.9..=1.1)),
            weekday: std::array::from_fn(|_| rng.gen_range(0.95..=1.05)),
            hour: std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(0.8..=1.2))),
        }
    }

    pub fn factor(&self, date: NaiveDate, hour: u32) -> f64 {
        let d = date.weekday().num_days_from_monday() as usize;
        self.month[date.month0() as usize] * self.weekday[d] * self.hour[d][hour as usize - 1]
    }
}

fn days_between(first: i32, last: i32) -> usize {
    (first..=last).map(|y| days_in_year(y) as usize).sum()
}

/// `base · pattern · (1 + noise·u)` with u uniform on [−1, 1], for whole
/// calendar years `first..=last`.
pub fn planted_series(
    first: i32,
    last: i32,
    base: f64,
    pattern: &PlantedPattern,
    noise: f64,
    seed: u64,
) -> HourlyLoadSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(first, 1, 1).expect("valid year");
    let days = days_between(first, last);
    let mut values = Vec::with_capacity(days * 24);
    for k in 0..days {
        let date = start + Duration::days(k as i64);
        for h in 1..=24 {
            let eps = if noise > 0.0 { rng.gen_range(-1.0..=1.0) * noise } else { 0.0 };
            values.push(base * pattern.factor(date, h) * (1.0 + eps));
        }
    }
    HourlyLoadSeries::from_values("synthetic", UnitConvention::NativeHourly, start, values).expect("positive values")
}

/// Settings for [`smoother_series`].
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherGenerator {
    pub alpha: f64,
    pub beta: f64,
    pub factors: SeasonalFactors,
    pub level: f64,
    pub trend: f64,
    /// Largest relative shock applied at hour 24 of each day.
    pub shock: f64,
    /// First year in which shocks are applied.
    pub shocks_from: i32,
}

/// Demand generated by the smoother's own recursion.
///
/// Each hour's demand is the one-step forecast (L + B)·S, multiplied at
/// hour 24 by 1 + e. Shock magnitudes are uniform on [shock/2, shock];
/// each sign pushes the level back toward its starting value so the
/// series stays bounded. The first hour is level·S, which is the state
/// the smoother initialises to.
pub fn smoother_series(first: i32, last: i32, generator: &SmootherGenerator, seed: u64) -> HourlyLoadSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(first, 1, 1).expect("valid year");
    let days = days_between(first, last);
    let (alpha, beta) = (generator.alpha, generator.beta);
    let mut level = generator.level;
    let mut trend = generator.trend;
    let target = generator.level;
    let mut values = Vec::with_capacity(days * 24);
    for k in 0..days {
        let date = start + Duration::days(k as i64);
        for h in 1..=24u32 {
            let key = SlotKey {
                month: date.month() as u8,
                weekday: date.weekday().number_from_monday() as u8,
                hour: h as u8,
            };
            let s = generator.factors.product(key);
            if values.is_empty() {
                values.push(level * s);
                continue;
            }
            let mut d = (level + trend) * s;
            if h == 24 && date.year() >= generator.shocks_from && generator.shock > 0.0 {
                let sign = if level - target + 24.0 * trend > 0.0 { -1.0 } else { 1.0 };
                d *= 1.0 + sign * rng.gen_range(generator.shock / 2.0..=generator.shock);
            }
            let prior = level + trend;
            let new_level = prior + alpha * (d / s - prior);
            trend += beta * (new_level - level - trend);
            level = new_level;
            values.push(d);
        }
    }
    HourlyLoadSeries::from_values("synthetic", UnitConvention::NativeHourly, start, values).expect("positive values")
}
