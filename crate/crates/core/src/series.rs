//! Hourly and annual load series.

use std::collections::BTreeMap;

use chrono::{Datelike, Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::calendar::{days_in_year, CalendarSlot, YearRange};
use crate::error::{Error, Result};

/// How hourly values relate to the underlying measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitConvention {
    /// Sum of the two half-hourly MW readings ending in the hour.
    SummedHalfHours,
    /// One reading per hour as published (e.g. ENTSO-E).
    NativeHourly,
}

/// Hourly demand laid out on a contiguous run of whole civil days.
///
/// Slot `k` is hour `k % 24 + 1` of day `start + k / 24`. Absent slots are
/// gaps awaiting [`crate::ingest::clean_gaps`]. Native hourly sources may
/// carry extra readings for a slot (the repeated autumn DST hour); those
/// are held separately until cleaning merges them.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyLoadSeries {
    country: String,
    convention: UnitConvention,
    start: NaiveDate,
    values: Vec<Option<f64>>,
    duplicates: BTreeMap<usize, Vec<f64>>,
}

impl HourlyLoadSeries {
    /// An all-gap series covering `first_day..=last_day`.
    pub fn empty(
        country: impl Into<String>,
        convention: UnitConvention,
        first_day: NaiveDate,
        last_day: NaiveDate,
    ) -> Result<Self> {
        if last_day < first_day {
            return Err(Error::Input(format!("series end {last_day} precedes start {first_day}")));
        }
        let days = (last_day - first_day).num_days() as usize + 1;
        Ok(HourlyLoadSeries {
            country: country.into(),
            convention,
            start: first_day,
            values: vec![None; days * 24],
            duplicates: BTreeMap::new(),
        })
    }

    /// A complete series from a flat vector of hourly values starting at
    /// hour 1 of `first_day`. The length must be a whole number of days.
    pub fn from_values(
        country: impl Into<String>,
        convention: UnitConvention,
        first_day: NaiveDate,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.is_empty() || values.len() % 24 != 0 {
            return Err(Error::Input(format!("{} hourly values do not form whole days", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Input(format!("invalid demand value {v}")));
        }
        Ok(HourlyLoadSeries {
            country: country.into(),
            convention,
            start: first_day,
            values: values.into_iter().map(Some).collect(),
            duplicates: BTreeMap::new(),
        })
    }

    pub fn country(&self) -> &str {
        &self.country
    }

    pub fn convention(&self) -> UnitConvention {
        self.convention
    }

    pub fn first_day(&self) -> NaiveDate {
        self.start
    }

    pub fn last_day(&self) -> NaiveDate {
        self.start + Duration::days(self.num_days() as i64 - 1)
    }

    pub fn num_days(&self) -> usize {
        self.values.len() / 24
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn slot_at(&self, index: usize) -> CalendarSlot {
        let date = self.start + Duration::days((index / 24) as i64);
        CalendarSlot::new(date, (index % 24) as u32 + 1)
    }

    pub fn index_of(&self, slot: &CalendarSlot) -> Option<usize> {
        let days = (slot.date() - self.start).num_days();
        if days < 0 || days as usize >= self.num_days() {
            return None;
        }
        Some(days as usize * 24 + slot.hour as usize - 1)
    }

    pub fn get(&self, slot: &CalendarSlot) -> Option<f64> {
        self.index_of(slot).and_then(|i| self.values[i])
    }

    pub fn value_at(&self, index: usize) -> Option<f64> {
        self.values[index]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Option<f64>] {
        &mut self.values
    }

    /// Record a reading for `slot`. A second reading for an occupied slot
    /// is kept as a duplicate for cleaning.
    pub fn push_reading(&mut self, slot: &CalendarSlot, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Input(format!("invalid demand {value} at {slot}")));
        }
        let index = self.index_of(slot).ok_or_else(|| Error::Input(format!("slot {slot} outside series range")))?;
        match self.values[index] {
            None => self.values[index] = Some(value),
            Some(_) => self.duplicates.entry(index).or_default().push(value),
        }
        Ok(())
    }

    pub fn duplicates(&self) -> &BTreeMap<usize, Vec<f64>> {
        &self.duplicates
    }

    pub(crate) fn take_duplicates(&mut self) -> BTreeMap<usize, Vec<f64>> {
        std::mem::take(&mut self.duplicates)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CalendarSlot, Option<f64>)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (self.slot_at(i), *v))
    }

    pub fn gap_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// No gaps and no pending duplicates.
    pub fn is_clean(&self) -> bool {
        self.gap_count() == 0 && self.duplicates.is_empty()
    }

    /// Years whose every hour lies inside the series.
    pub fn full_years(&self) -> Vec<i32> {
        let first = self.start.year();
        let last = self.last_day().year();
        (first..=last)
            .filter(|&y| {
                NaiveDate::from_ymd_opt(y, 1, 1).unwrap() >= self.start
                    && NaiveDate::from_ymd_opt(y, 12, 31).unwrap() <= self.last_day()
            })
            .collect()
    }

    /// Hourly values of `year`, failing if the year is partial or has gaps.
    pub fn year_values(&self, year: i32) -> Result<&[Option<f64>]> {
        let jan1 = NaiveDate::from_ymd_opt(year, 1, 1).ok_or(Error::PartialYear(year))?;
        let offset = (jan1 - self.start).num_days();
        let hours = days_in_year(year) as usize * 24;
        if offset < 0 || offset as usize * 24 + hours > self.values.len() {
            return Err(Error::PartialYear(year));
        }
        let from = offset as usize * 24;
        Ok(&self.values[from..from + hours])
    }

    /// Complete hourly values of `year` (no gaps allowed).
    pub fn complete_year(&self, year: i32) -> Result<Vec<f64>> {
        self.year_values(year)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    let date = NaiveDate::from_ymd_opt(year, 1, 1).unwrap() + Duration::days((i / 24) as i64);
                    Error::EmptyPeriod(format!("{}", CalendarSlot::new(date, (i % 24) as u32 + 1)))
                })
            })
            .collect()
    }

    /// Sub-series covering exactly the calendar years in `years`.
    pub fn restrict_years(&self, years: YearRange) -> Result<Self> {
        let mut values = Vec::new();
        for year in years.iter() {
            values.extend_from_slice(self.year_values(year)?);
        }
        let start = NaiveDate::from_ymd_opt(years.first, 1, 1).unwrap();
        let offset = (start - self.start).num_days() as usize * 24;
        let end = offset + values.len();
        let duplicates = self.duplicates.range(offset..end).map(|(k, v)| (k - offset, v.clone())).collect();
        Ok(HourlyLoadSeries { country: self.country.clone(), convention: self.convention, start, values, duplicates })
    }

    /// Every value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut().flatten() {
            *v *= factor;
        }
        for dup in out.duplicates.values_mut() {
            for v in dup.iter_mut() {
                *v *= factor;
            }
        }
        out
    }
}

/// Total demand per calendar year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualLoadSeries {
    pub country: String,
    pub totals: BTreeMap<i32, f64>,
}

impl AnnualLoadSeries {
    pub fn new(country: impl Into<String>, totals: BTreeMap<i32, f64>) -> Result<Self> {
        if let Some((y, t)) = totals.iter().find(|(_, t)| !(**t > 0.0)) {
            return Err(Error::Input(format!("annual total for {y} is not positive: {t}")));
        }
        Ok(AnnualLoadSeries { country: country.into(), totals })
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.totals.get(&year).copied()
    }
}
