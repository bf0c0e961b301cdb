//! Month, weekday and hour seasonality indices.
//!
//! Indices are multiplicative and built top-down. The monthly index compares
//! a month's average daily demand with the year's. The weekday index
//! compares a weekday's average daily demand within a month with the
//! month's, scaled by the overall monthly index. The hourly index compares
//! one hour of a (month, weekday) with that day-type's average hour, scaled
//! by both overall indices.
//!
//! Every overall mean is taken over the year range the tables were built
//! for. Forecasting code must build them on the training window only.

use serde::{Deserialize, Serialize};

use crate::calendar::{days_in_year, YearRange};
use crate::error::{Error, Result};
use crate::series::HourlyLoadSeries;

/// Denominator of the annual average daily demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayBasis {
    /// Days actually in the year (366 in leap years). Keeps
    /// Σ_m |M|·SI¹ equal to the year's day count.
    #[default]
    ActualDays,
    /// Always 365.
    Fixed365,
}

impl DayBasis {
    pub fn days(self, year: i32) -> f64 {
        match self {
            DayBasis::ActualDays => f64::from(days_in_year(year)),
            DayBasis::Fixed365 => 365.0,
        }
    }
}

/// Where the overall monthly and weekday indices enter the hourly index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HourlyForm {
    /// SI³ = avg hour / (avg hour of the day-type · ŚI¹_m · ŚI²_d).
    #[default]
    Verbal,
    /// SI³ = avg hour · ŚI¹_m · ŚI²_d / avg hour of the day-type.
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SeasonalityOptions {
    pub day_basis: DayBasis,
    pub form: HourlyForm,
}

/// Sums for one calendar year, grouped by month and weekday.
#[derive(Debug, Clone)]
struct YearSums {
    year: i32,
    month_total: [f64; 12],
    month_days: [u32; 12],
    /// Number of days of each weekday in each month.
    weekday_days: [[u32; 7]; 12],
    /// Demand per (month, weekday, hour), summed over those days.
    hour_total: [[[f64; 24]; 7]; 12],
}

impl YearSums {
    fn from_series(series: &HourlyLoadSeries, year: i32) -> Result<Self> {
        let values = series.complete_year(year)?;
        let jan1 = chrono::NaiveDate::from_ymd_opt(year, 1, 1).unwrap();
        let mut sums = YearSums {
            year,
            month_total: [0.0; 12],
            month_days: [0; 12],
            weekday_days: [[0; 7]; 12],
            hour_total: [[[0.0; 24]; 7]; 12],
        };
        for (day, hours) in values.chunks_exact(24).enumerate() {
            let date = jan1 + chrono::Duration::days(day as i64);
            let m = chrono::Datelike::month0(&date) as usize;
            let d = chrono::Datelike::weekday(&date).num_days_from_monday() as usize;
            sums.month_days[m] += 1;
            sums.weekday_days[m][d] += 1;
            for (h, &v) in hours.iter().enumerate() {
                sums.month_total[m] += v;
                sums.hour_total[m][d][h] += v;
            }
        }
        Ok(sums)
    }

    fn year_total(&self) -> f64 {
        self.month_total.iter().sum()
    }

    fn weekday_total(&self, m: usize, d: usize) -> f64 {
        self.hour_total[m][d].iter().sum()
    }
}

fn collect_sums(series: &HourlyLoadSeries, years: YearRange) -> Result<Vec<YearSums>> {
    years.iter().map(|y| YearSums::from_series(series, y)).collect()
}

fn month_index(month: u32) -> Option<usize> {
    (1..=12).contains(&month).then(|| month as usize - 1)
}

fn weekday_index(weekday: u32) -> Option<usize> {
    (1..=7).contains(&weekday).then(|| weekday as usize - 1)
}

fn hour_index(hour: u32) -> Option<usize> {
    (1..=24).contains(&hour).then(|| hour as usize - 1)
}

fn positive(value: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{} is {value}", what())))
    }
}

/// SI¹ per (year, month) and its mean over years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlySITable {
    pub years: YearRange,
    pub day_basis: DayBasis,
    values: Vec<[f64; 12]>,
    overall: [f64; 12],
}

impl MonthlySITable {
    /// SI¹ for `month` 1..=12 of `year`.
    pub fn value(&self, year: i32, month: u32) -> Option<f64> {
        Some(self.values[self.years.offset(year)?][month_index(month)?])
    }

    /// ŚI¹ for `month` 1..=12.
    pub fn overall(&self, month: u32) -> Option<f64> {
        month_index(month).map(|m| self.overall[m])
    }

    pub fn overall_all(&self) -> &[f64; 12] {
        &self.overall
    }

    pub fn year_values(&self, year: i32) -> Option<&[f64; 12]> {
        self.years.offset(year).map(|i| &self.values[i])
    }
}

pub fn compute_monthly_si(series: &HourlyLoadSeries, years: YearRange, day_basis: DayBasis) -> Result<MonthlySITable> {
    let sums = collect_sums(series, years)?;
    monthly_from_sums(&sums, years, day_basis)
}

fn monthly_from_sums(sums: &[YearSums], years: YearRange, day_basis: DayBasis) -> Result<MonthlySITable> {
    let mut values = Vec::with_capacity(sums.len());
    for s in sums {
        let annual_daily =
            positive(s.year_total() / day_basis.days(s.year), || format!("average daily demand of {}", s.year))?;
        let mut row = [0.0; 12];
        for m in 0..12 {
            if s.month_days[m] == 0 {
                return Err(Error::EmptyPeriod(format!("{}-{:02}", s.year, m + 1)));
            }
            row[m] = s.month_total[m] / f64::from(s.month_days[m]) / annual_daily;
        }
        values.push(row);
    }
    let mut overall = [0.0; 12];
    for (m, o) in overall.iter_mut().enumerate() {
        *o = values.iter().map(|r| r[m]).sum::<f64>() / values.len() as f64;
    }
    Ok(MonthlySITable { years, day_basis, values, overall })
}

/// SI² per (year, month, weekday) and its mean over (year, month).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekdaySITable {
    pub years: YearRange,
    values: Vec<[[f64; 7]; 12]>,
    overall: [f64; 7],
}

impl WeekdaySITable {
    /// SI² for `weekday` 1 (Monday)..=7 of `month` in `year`.
    pub fn value(&self, year: i32, month: u32, weekday: u32) -> Option<f64> {
        Some(self.values[self.years.offset(year)?][month_index(month)?][weekday_index(weekday)?])
    }

    /// ŚI² for `weekday` 1..=7.
    pub fn overall(&self, weekday: u32) -> Option<f64> {
        weekday_index(weekday).map(|d| self.overall[d])
    }

    pub fn overall_all(&self) -> &[f64; 7] {
        &self.overall
    }
}

pub fn compute_weekday_si(series: &HourlyLoadSeries, monthly: &MonthlySITable) -> Result<WeekdaySITable> {
    let sums = collect_sums(series, monthly.years)?;
    weekday_from_sums(&sums, monthly)
}

fn weekday_from_sums(sums: &[YearSums], monthly: &MonthlySITable) -> Result<WeekdaySITable> {
    let mut values = Vec::with_capacity(sums.len());
    for s in sums {
        let mut table = [[0.0; 7]; 12];
        for m in 0..12 {
            let month_daily = positive(s.month_total[m] / f64::from(s.month_days[m]), || {
                format!("average daily demand of {}-{:02}", s.year, m + 1)
            })?;
            let denom = month_daily * monthly.overall[m];
            for d in 0..7 {
                let n = s.weekday_days[m][d];
                if n == 0 {
                    return Err(Error::EmptyPeriod(format!("weekday {} of {}-{:02}", d + 1, s.year, m + 1)));
                }
                table[m][d] = s.weekday_total(m, d) / f64::from(n) / denom;
            }
        }
        values.push(table);
    }
    let count = (values.len() * 12) as f64;
    let mut overall = [0.0; 7];
    for (d, o) in overall.iter_mut().enumerate() {
        *o = values.iter().flat_map(|t| t.iter().map(move |row| row[d])).sum::<f64>() / count;
    }
    Ok(WeekdaySITable { years: monthly.years, values, overall })
}

/// SI³ per (year, month, weekday, hour) with its overall means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlySITable {
    pub years: YearRange,
    pub form: HourlyForm,
    values: Vec<[[[f64; 24]; 7]; 12]>,
    overall_by_hour: [f64; 24],
    mean_by_slot: [[f64; 24]; 7],
}

impl HourlySITable {
    /// SI³ for hour-ending `hour` 1..=24.
    pub fn value(&self, year: i32, month: u32, weekday: u32, hour: u32) -> Option<f64> {
        Some(self.values[self.years.offset(year)?][month_index(month)?][weekday_index(weekday)?][hour_index(hour)?])
    }

    /// ŚI³_h: mean over all (year, month, weekday).
    pub fn overall_hour(&self, hour: u32) -> Option<f64> {
        hour_index(hour).map(|h| self.overall_by_hour[h])
    }

    /// μ^{d,h}: mean over all (year, month).
    pub fn mean_by_slot(&self, weekday: u32, hour: u32) -> Option<f64> {
        Some(self.mean_by_slot[weekday_index(weekday)?][hour_index(hour)?])
    }

    /// The full μ table, indexed `[weekday - 1][hour - 1]`.
    pub fn mu(&self) -> &[[f64; 24]; 7] {
        &self.mean_by_slot
    }

    /// The twelve monthly SI³ values of one (year, weekday, hour).
    pub fn monthly_samples(&self, year: i32, weekday: u32, hour: u32) -> Option<[f64; 12]> {
        let table = &self.values[self.years.offset(year)?];
        let (d, h) = (weekday_index(weekday)?, hour_index(hour)?);
        Some(std::array::from_fn(|m| table[m][d][h]))
    }

    /// Every (year, month) sample of one (weekday, hour), year-major.
    pub fn slot_samples(&self, weekday: u32, hour: u32) -> Option<Vec<f64>> {
        let (d, h) = (weekday_index(weekday)?, hour_index(hour)?);
        Some(self.values.iter().flat_map(|t| t.iter().map(move |month| month[d][h])).collect())
    }
}

pub fn compute_hourly_si(
    series: &HourlyLoadSeries,
    monthly: &MonthlySITable,
    weekday: &WeekdaySITable,
    form: HourlyForm,
) -> Result<HourlySITable> {
    if weekday.years != monthly.years {
        return Err(Error::Config(format!(
            "weekday table covers {} but monthly table covers {}",
            weekday.years, monthly.years
        )));
    }
    let sums = collect_sums(series, monthly.years)?;
    hourly_from_sums(&sums, monthly, weekday, form)
}

fn hourly_from_sums(
    sums: &[YearSums],
    monthly: &MonthlySITable,
    weekday: &WeekdaySITable,
    form: HourlyForm,
) -> Result<HourlySITable> {
    let mut values = Vec::with_capacity(sums.len());
    for s in sums {
        let mut table = [[[0.0; 24]; 7]; 12];
        for m in 0..12 {
            for d in 0..7 {
                let n = f64::from(s.weekday_days[m][d]);
                let day_hourly = positive(s.weekday_total(m, d) / (24.0 * n), || {
                    format!("average hourly demand of weekday {} in {}-{:02}", d + 1, s.year, m + 1)
                })?;
                let scale = monthly.overall[m] * weekday.overall[d];
                for h in 0..24 {
                    let ratio = s.hour_total[m][d][h] / n / day_hourly;
                    table[m][d][h] = match form {
                        HourlyForm::Verbal => ratio / scale,
                        HourlyForm::Symbolic => ratio * scale,
                    };
                }
            }
        }
        values.push(table);
    }

    let mut overall_by_hour = [0.0; 24];
    let mut mean_by_slot = [[0.0; 24]; 7];
    for t in &values {
        for month in t {
            for d in 0..7 {
                for h in 0..24 {
                    overall_by_hour[h] += month[d][h];
                    mean_by_slot[d][h] += month[d][h];
                }
            }
        }
    }
    let months = (values.len() * 12) as f64;
    for v in overall_by_hour.iter_mut() {
        *v /= months * 7.0;
    }
    for row in mean_by_slot.iter_mut() {
        for v in row.iter_mut() {
            *v /= months;
        }
    }
    Ok(HourlySITable { years: monthly.years, form, values, overall_by_hour, mean_by_slot })
}

/// The three index levels built over one year range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalityIndexSet {
    pub monthly: MonthlySITable,
    pub weekday: WeekdaySITable,
    pub hourly: HourlySITable,
}

impl SeasonalityIndexSet {
    /// Build all three levels in one pass over the series.
    pub fn compute(series: &HourlyLoadSeries, years: YearRange, options: SeasonalityOptions) -> Result<Self> {
        let sums = collect_sums(series, years)?;
        let monthly = monthly_from_sums(&sums, years, options.day_basis)?;
        let weekday = weekday_from_sums(&sums, &monthly)?;
        let hourly = hourly_from_sums(&sums, &monthly, &weekday, options.form)?;
        Ok(SeasonalityIndexSet { monthly, weekday, hourly })
    }

    pub fn years(&self) -> YearRange {
        self.monthly.years
    }
}

/// Five-number summary of the SI³ samples of one (weekday, hour).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSummary {
    pub weekday: u32,
    pub hour: u32,
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linear-interpolation quantile of sorted data (the R-7 / NumPy default).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(weekday: u32, hour: u32, samples: &[f64]) -> Result<BoxSummary> {
    if samples.is_empty() {
        return Err(Error::EmptyPeriod(format!("samples for weekday {weekday} hour {hour}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(BoxSummary {
        weekday,
        hour,
        n: sorted.len(),
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Distribution of SI³ over (year, month) for every (weekday, hour),
/// weekday-major.
pub fn si_boxplot_data(table: &HourlySITable) -> Result<Vec<BoxSummary>> {
    let mut out = Vec::with_capacity(168);
    for d in 1..=7 {
        for h in 1..=24 {
            let samples = table.slot_samples(d, h).expect("indices in range");
            out.push(summarize(d, h, &samples)?);
        }
    }
    Ok(out)
}
