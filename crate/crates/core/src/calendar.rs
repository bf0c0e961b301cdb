//! Civil-calendar coordinates for hour-ending load slots.

use std::fmt;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const WEEKDAY_NAMES: [&str; 7] = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"];

/// One hour of the civil calendar, labelled by the hour that ends it.
///
/// `hour` runs 1..=24: hour 1 covers 00:00–01:00 and hour 24 covers
/// 23:00–24:00 of the same civil day. `weekday` is 1 for Monday through 7
/// for Sunday.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CalendarSlot {
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub weekday: u32,
    pub hour: u32,
}

impl CalendarSlot {
    /// Panics if `hour` is outside 1..=24.
    pub fn new(date: NaiveDate, hour: u32) -> Self {
        assert!((1..=24).contains(&hour), "hour {hour} outside 1..=24");
        CalendarSlot {
            year: date.year(),
            month: date.month(),
            day: date.day(),
            weekday: date.weekday().number_from_monday(),
            hour,
        }
    }

    pub fn from_ymdh(year: i32, month: u32, day: u32, hour: u32) -> Result<Self> {
        let date = NaiveDate::from_ymd_opt(year, month, day)
            .ok_or_else(|| Error::Input(format!("invalid date {year}-{month:02}-{day:02}")))?;
        if !(1..=24).contains(&hour) {
            return Err(Error::Input(format!("hour {hour} outside 1..=24")));
        }
        Ok(Self::new(date, hour))
    }

    /// The slot whose interval ends at `end`. `end` must fall on a full hour.
    pub fn from_hour_ending(end: NaiveDateTime) -> Option<Self> {
        if end.minute() != 0 || end.second() != 0 || end.nanosecond() != 0 {
            return None;
        }
        if end.hour() == 0 {
            Some(Self::new(end.date().pred_opt()?, 24))
        } else {
            Some(Self::new(end.date(), end.hour()))
        }
    }

    pub fn date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.month, self.day).expect("slot holds a valid date")
    }

    /// Civil datetime at which this slot's hour ends.
    pub fn hour_ending(&self) -> NaiveDateTime {
        self.date().and_time(NaiveTime::MIN) + Duration::hours(i64::from(self.hour))
    }

    /// Zero-based (weekday, hour) indices, for 7×24 tables.
    pub fn weekday_hour_index(&self) -> (usize, usize) {
        (self.weekday as usize - 1, self.hour as usize - 1)
    }
}

impl fmt::Display for CalendarSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02} {:02}:00", self.year, self.month, self.day, self.hour)
    }
}

/// Inclusive range of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

impl YearRange {
    pub fn new(first: i32, last: i32) -> Result<Self> {
        if last < first {
            return Err(Error::Config(format!("empty year range {first}..={last}")));
        }
        Ok(YearRange { first, last })
    }

    pub fn single(year: i32) -> Self {
        YearRange { first: year, last: year }
    }

    pub fn len(&self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.first..=self.last).contains(&year)
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.first..=self.last
    }

    pub fn offset(&self, year: i32) -> Option<usize> {
        self.contains(year).then(|| (year - self.first) as usize)
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.last)
    }
}

pub fn days_in_year(year: i32) -> u32 {
    if NaiveDate::from_ymd_opt(year, 2, 29).is_some() {
        366
    } else {
        365
    }
}

pub fn days_in_month(year: i32, month: u32) -> u32 {
    let first = NaiveDate::from_ymd_opt(year, month, 1).expect("valid month");
    let next =
        if month == 12 { NaiveDate::from_ymd_opt(year + 1, 1, 1) } else { NaiveDate::from_ymd_opt(year, month + 1, 1) }
            .expect("valid month");
    (next - first).num_days() as u32
}

/// Label used in table layouts: hour-ending 1..=23 as "H:00", hour 24 as "0:00".
pub fn hour_label(hour: u32) -> String {
    format!("{}:00", hour % 24)
}
