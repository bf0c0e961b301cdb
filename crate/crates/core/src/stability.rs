//! ε-sweep equivalence testing of hourly seasonality indices across years.
//!
//! For one (weekday, hour) slot and a pair of years, the twelve monthly SI³
//! values of each year form two samples. ε grows from zero in fixed steps
//! until the mean difference is shown to lie inside (−ε, ε) by two
//! one-tailed tests. ε̂ is the largest such ε over all pairs of years, and
//! δ expresses it as a percentage of the slot's mean index μ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calendar::YearRange;
use crate::error::{Error, Result};
use crate::seasonality::HourlySITable;
use crate::stats::{one_tailed_test, standard_error, SampleSummary, Tail, TestFlavor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityConfig {
    pub epsilon_step: f64,
    pub epsilon_cap: f64,
    pub alpha: f64,
    pub flavor: TestFlavor,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig { epsilon_step: 0.001, epsilon_cap: 1.0, alpha: 0.05, flavor: TestFlavor::Welch }
    }
}

impl StabilityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_step > 0.0 && self.epsilon_step <= self.epsilon_cap && self.epsilon_cap.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 < epsilon_step <= epsilon_cap, got step {} cap {}",
                self.epsilon_step, self.epsilon_cap
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        Ok(())
    }

    /// Largest k with k·step ≤ cap.
    fn max_steps(&self) -> u64 {
        (self.epsilon_cap / self.epsilon_step + 1e-9).floor() as u64
    }

    pub fn epsilon_at(&self, k: u64) -> f64 {
        k as f64 * self.epsilon_step
    }
}

/// Outcome of one year pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairEpsilon {
    pub epsilon: f64,
    pub steps: u64,
    /// The cap was reached without both tests rejecting.
    pub capped: bool,
}

/// Whether both one-tailed tests reject at margin ε.
pub fn both_reject(a: &SampleSummary, b: &SampleSummary, epsilon: f64, config: &StabilityConfig) -> Result<bool> {
    let left = one_tailed_test(a, b, epsilon, Tail::Left, config.alpha, config.flavor)?;
    if !left.rejected {
        return Ok(false);
    }
    let right = one_tailed_test(a, b, -epsilon, Tail::Right, config.alpha, config.flavor)?;
    Ok(right.rejected)
}

/// Smallest ε = k·step at which both tests reject, for two monthly samples.
///
/// Both p-values fall monotonically as ε grows, so the first rejecting step
/// of the ascending sweep is found by bisection over k.
pub fn epsilon_for_pair(si_y: &[f64], si_y2: &[f64], config: &StabilityConfig) -> Result<PairEpsilon> {
    config.validate()?;
    let a = SampleSummary::from_slice(si_y)?;
    let b = SampleSummary::from_slice(si_y2)?;
    epsilon_for_summaries(&a, &b, config)
}

pub fn epsilon_for_summaries(a: &SampleSummary, b: &SampleSummary, config: &StabilityConfig) -> Result<PairEpsilon> {
    let max_k = config.max_steps();
    let (se, _) = standard_error(a, b, config.flavor);
    if se == 0.0 {
        // Exact samples: the difference itself is the margin.
        let diff = (a.mean - b.mean).abs();
        let k = (diff / config.epsilon_step - 1e-9).ceil().max(0.0) as u64;
        return Ok(if k > max_k {
            PairEpsilon { epsilon: config.epsilon_at(max_k), steps: max_k, capped: true }
        } else {
            PairEpsilon { epsilon: config.epsilon_at(k), steps: k, capped: false }
        });
    }
    if !both_reject(a, b, config.epsilon_at(max_k), config)? {
        return Ok(PairEpsilon { epsilon: config.epsilon_at(max_k), steps: max_k, capped: true });
    }
    if both_reject(a, b, 0.0, config)? {
        return Ok(PairEpsilon { epsilon: 0.0, steps: 0, capped: false });
    }
    // Invariant: lo fails, hi rejects.
    let (mut lo, mut hi) = (0u64, max_k);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if both_reject(a, b, config.epsilon_at(mid), config)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PairEpsilon { epsilon: config.epsilon_at(hi), steps: hi, capped: false })
}

/// A value per (weekday, hour), indexed `[weekday - 1][hour - 1]`, with
/// the weekday / weekend / week means used in the published layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotTable(pub [[f64; 24]; 7]);

impl SlotTable {
    pub fn get(&self, weekday: u32, hour: u32) -> f64 {
        self.0[weekday as usize - 1][hour as usize - 1]
    }

    fn mean_over(&self, days: std::ops::Range<usize>, hours: std::ops::Range<usize>) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for d in days {
            for h in hours.clone() {
                sum += self.0[d][h];
                n += 1;
            }
        }
        sum / n as f64
    }

    /// Mean over Monday–Friday at hour `hour`.
    pub fn weekday_mean_at(&self, hour: u32) -> f64 {
        let h = hour as usize - 1;
        self.mean_over(0..5, h..h + 1)
    }

    /// Mean over Saturday and Sunday at hour `hour`.
    pub fn weekend_mean_at(&self, hour: u32) -> f64 {
        let h = hour as usize - 1;
        self.mean_over(5..7, h..h + 1)
    }

    pub fn week_mean_at(&self, hour: u32) -> f64 {
        let h = hour as usize - 1;
        self.mean_over(0..7, h..h + 1)
    }

    /// Mean over all hours of `weekday`.
    pub fn day_mean(&self, weekday: u32) -> f64 {
        let d = weekday as usize - 1;
        self.mean_over(d..d + 1, 0..24)
    }

    pub fn weekday_mean(&self) -> f64 {
        self.mean_over(0..5, 0..24)
    }

    pub fn weekend_mean(&self) -> f64 {
        self.mean_over(5..7, 0..24)
    }

    pub fn overall_mean(&self) -> f64 {
        self.mean_over(0..7, 0..24)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// ε̂ per slot: maximum and mean over year pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonHatTable {
    pub years: YearRange,
    pub config: StabilityConfig,
    pub pairs: usize,
    pub max: SlotTable,
    pub mean: SlotTable,
    /// Slots where at least one pair hit the cap.
    pub capped: [[bool; 24]; 7],
}

impl EpsilonHatTable {
    pub fn any_capped(&self) -> bool {
        self.capped.iter().flatten().any(|&c| c)
    }
}

pub fn epsilon_hat_table(
    hourly: &HourlySITable,
    years: YearRange,
    config: &StabilityConfig,
) -> Result<EpsilonHatTable> {
    config.validate()?;
    if years.first < hourly.years.first || years.last > hourly.years.last {
        return Err(Error::MissingSi(format!("stability range {years} outside index range {}", hourly.years)));
    }
    if years.len() < 2 {
        return Err(Error::Config(format!("stability range {years} has no pair of years")));
    }
    let year_list: Vec<i32> = years.iter().collect();
    let pairs: Vec<(usize, usize)> =
        (0..year_list.len()).flat_map(|i| (i + 1..year_list.len()).map(move |j| (i, j))).collect();

    let slots: Vec<(u32, u32)> = (1..=7).flat_map(|d| (1..=24).map(move |h| (d, h))).collect();
    let results: Vec<(f64, f64, bool)> = slots
        .par_iter()
        .map(|&(d, h)| -> Result<(f64, f64, bool)> {
            let summaries: Vec<SampleSummary> = year_list
                .iter()
                .map(|&y| SampleSummary::from_slice(&hourly.monthly_samples(y, d, h).expect("year in range")))
                .collect::<Result<_>>()?;
            let mut max = 0.0f64;
            let mut sum = 0.0;
            let mut capped = false;
            for &(i, j) in &pairs {
                let e = epsilon_for_summaries(&summaries[i], &summaries[j], config)?;
                max = max.max(e.epsilon);
                sum += e.epsilon;
                capped |= e.capped;
            }
            Ok((max, sum / pairs.len() as f64, capped))
        })
        .collect::<Result<_>>()?;

    let mut max = [[0.0; 24]; 7];
    let mut mean = [[0.0; 24]; 7];
    let mut capped = [[false; 24]; 7];
    for (&(d, h), (mx, mn, c)) in slots.iter().zip(results) {
        let (d, h) = (d as usize - 1, h as usize - 1);
        max[d][h] = mx;
        mean[d][h] = mn;
        capped[d][h] = c;
    }
    Ok(EpsilonHatTable {
        years,
        config: *config,
        pairs: pairs.len(),
        max: SlotTable(max),
        mean: SlotTable(mean),
        capped,
    })
}

/// ε̂, μ and δ per slot for one country and year range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub epsilon: EpsilonHatTable,
    pub mu: SlotTable,
    /// 100·ε̂/μ, from the per-slot maximum.
    pub delta: SlotTable,
    /// 100·ε̂/μ, from the per-slot mean over pairs.
    pub delta_of_mean: SlotTable,
}

impl StabilityReport {
    /// Overall δ is below `threshold_percent` and no slot hit the cap.
    pub fn is_stable(&self, threshold_percent: f64) -> bool {
        !self.epsilon.any_capped() && self.delta.overall_mean() < threshold_percent
    }
}

/// 100·ε̂/μ slot by slot; μ must be positive everywhere.
pub fn delta_table_from(epsilon: &SlotTable, mu: &SlotTable) -> Result<SlotTable> {
    let mut delta = [[0.0; 24]; 7];
    for d in 0..7 {
        for h in 0..24 {
            let m = mu.0[d][h];
            if !(m > 0.0) {
                return Err(Error::Domain(format!("mean index for weekday {} hour {} is {m}", d + 1, h + 1)));
            }
            delta[d][h] = 100.0 * epsilon.0[d][h] / m;
        }
    }
    Ok(SlotTable(delta))
}

pub fn delta_table(epsilon: EpsilonHatTable, mu: &[[f64; 24]; 7]) -> Result<StabilityReport> {
    let mu = SlotTable(*mu);
    let delta = delta_table_from(&epsilon.max, &mu)?;
    let delta_of_mean = delta_table_from(&epsilon.mean, &mu)?;
    Ok(StabilityReport { epsilon, mu, delta, delta_of_mean })
}

/// ε̂ then δ for `years` of an hourly index table.
pub fn stability_report(hourly: &HourlySITable, years: YearRange, config: &StabilityConfig) -> Result<StabilityReport> {
    let eps = epsilon_hat_table(hourly, years, config)?;
    delta_table(eps, hourly.mu())
}
