//! Raw load and GDP ingestion, half-hour → hour conversion and gap repair.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{Datelike, Duration, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::calendar::CalendarSlot;
use crate::error::{Error, Result};
use crate::series::{AnnualLoadSeries, HourlyLoadSeries, UnitConvention};

/// One demand reading, stamped with the local civil time at which its
/// interval ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawLoadRecord {
    pub timestamp: NaiveDateTime,
    pub demand: f64,
}

/// Column layout of a load CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoadCsvSchema {
    pub timestamp_column: String,
    pub demand_column: String,
    /// chrono format string; "24:00" is accepted as midnight of the next day.
    pub timestamp_format: String,
    pub delimiter: char,
}

impl Default for LoadCsvSchema {
    fn default() -> Self {
        LoadCsvSchema {
            timestamp_column: "datetime".into(),
            demand_column: "mw".into(),
            timestamp_format: "%Y-%m-%d %H:%M".into(),
            delimiter: ',',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

/// Records that parsed, plus every row that did not.
#[derive(Debug, Clone, Default)]
pub struct ParsedLoad {
    pub records: Vec<RawLoadRecord>,
    pub row_errors: Vec<RowError>,
}

impl ParsedLoad {
    /// The records, or an error summarising the rejected rows.
    pub fn into_strict(self) -> Result<Vec<RawLoadRecord>> {
        match self.row_errors.first() {
            None => Ok(self.records),
            Some(first) => Err(Error::Rows {
                count: self.row_errors.len(),
                first_line: first.line,
                first_message: first.message.clone(),
            }),
        }
    }
}

fn parse_timestamp(text: &str, format: &str) -> Option<NaiveDateTime> {
    if let Ok(t) = NaiveDateTime::parse_from_str(text, format) {
        return Some(t);
    }
    // Some operators publish the last interval of a day as 24:00.
    let pos = text.find("24:00")?;
    let mut fixed = text.to_string();
    fixed.replace_range(pos..pos + 5, "00:00");
    NaiveDateTime::parse_from_str(&fixed, format).ok().map(|t| t + Duration::days(1))
}

/// Parse a delimiter-separated load file with a header row.
///
/// Rows that fail to parse or carry negative demand are collected into
/// [`ParsedLoad::row_errors`] with their 1-based line numbers.
pub fn parse_load_csv<R: Read>(reader: R, schema: &LoadCsvSchema) -> Result<ParsedLoad> {
    if !schema.delimiter.is_ascii() {
        return Err(Error::Config(format!("delimiter {:?} is not ASCII", schema.delimiter)));
    }
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Input("empty load file".into()));
    }
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("column {name:?} not found in header")))
    };
    let ts_col = column(&schema.timestamp_column)?;
    let demand_col = column(&schema.demand_column)?;

    let mut out = ParsedLoad::default();
    let mut rows = 0usize;
    for row in csv.records() {
        rows += 1;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.row_errors.push(RowError { line, message: e.to_string() });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        let fail = |message: String| RowError { line, message };
        let ts_text = row.get(ts_col).unwrap_or("");
        let Some(timestamp) = parse_timestamp(ts_text, &schema.timestamp_format) else {
            out.row_errors.push(fail(format!("unparseable timestamp {ts_text:?}")));
            continue;
        };
        let demand_text = row.get(demand_col).unwrap_or("");
        let demand: f64 = match demand_text.parse() {
            Ok(v) => v,
            Err(_) => {
                out.row_errors.push(fail(format!("unparseable demand {demand_text:?}")));
                continue;
            }
        };
        if !demand.is_finite() || demand < 0.0 {
            out.row_errors.push(fail(format!("demand must be non-negative, got {demand}")));
            continue;
        }
        out.records.push(RawLoadRecord { timestamp, demand });
    }
    if rows == 0 {
        return Err(Error::Input("load file has no data rows".into()));
    }
    Ok(out)
}

/// End of the hour containing a half-hour interval that ends at `t`.
fn enclosing_hour_end(t: NaiveDateTime) -> NaiveDateTime {
    if t.minute() == 0 {
        t
    } else {
        t + Duration::minutes(i64::from(60 - t.minute()))
    }
}

/// Sum each pair of half-hourly readings into its hour-ending slot.
///
/// Slot H receives the readings stamped H−0:30 and H:00. An hour missing
/// either reading is left absent for [`clean_gaps`].
pub fn halfhourly_to_hourly(records: &[RawLoadRecord], country: &str) -> Result<HourlyLoadSeries> {
    let (first, last) = match (records.first(), records.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Input("no half-hourly records".into())),
    };
    let mut saw_half_hour_step = records.len() == 1;
    for (i, r) in records.iter().enumerate() {
        let t = r.timestamp;
        if t.second() != 0 || (t.minute() != 0 && t.minute() != 30) {
            return Err(Error::Input(format!("timestamp {t} is not on a 30-minute boundary")));
        }
        if i > 0 {
            let step = t - records[i - 1].timestamp;
            if step == Duration::zero() {
                return Err(Error::Input(format!("duplicate timestamp {t}")));
            }
            if step < Duration::zero() {
                return Err(Error::Input(format!("timestamps out of order at {t}")));
            }
            saw_half_hour_step |= step == Duration::minutes(30);
        }
    }
    if !saw_half_hour_step {
        return Err(Error::Input("records are not at a 30-minute cadence".into()));
    }

    let slot_of =
        |t: NaiveDateTime| CalendarSlot::from_hour_ending(enclosing_hour_end(t)).expect("aligned to the hour");
    let mut series = HourlyLoadSeries::empty(
        country,
        UnitConvention::SummedHalfHours,
        slot_of(first.timestamp).date(),
        slot_of(last.timestamp).date(),
    )?;
    let mut sums: Vec<(f64, u8)> = vec![(0.0, 0); series.len()];
    for r in records {
        let slot = slot_of(r.timestamp);
        let i = series.index_of(&slot).expect("slot within range");
        sums[i].0 += r.demand;
        sums[i].1 += 1;
    }
    for (v, (sum, count)) in series.values_mut().iter_mut().zip(sums) {
        if count == 2 {
            *v = Some(sum);
        }
    }
    Ok(series)
}

/// How native hourly timestamps label their interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HourLabel {
    /// Timestamp is the end of the interval (01:00 covers 00:00–01:00).
    #[default]
    Ending,
    /// Timestamp is the start of the interval, as ENTSO-E publishes it.
    Beginning,
}

/// Place native hourly readings on the slot grid. Repeated civil hours
/// (autumn DST) are kept as duplicates for [`clean_gaps`] to merge.
pub fn native_hourly_series(records: &[RawLoadRecord], country: &str, label: HourLabel) -> Result<HourlyLoadSeries> {
    let slot_of = |t: NaiveDateTime| -> Result<CalendarSlot> {
        let end = match label {
            HourLabel::Ending => t,
            HourLabel::Beginning => t + Duration::hours(1),
        };
        CalendarSlot::from_hour_ending(end).ok_or_else(|| Error::Input(format!("timestamp {t} is not on the hour")))
    };
    let (first, last) = match (records.first(), records.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Input("no hourly records".into())),
    };
    let mut series = HourlyLoadSeries::empty(
        country,
        UnitConvention::NativeHourly,
        slot_of(first.timestamp)?.date(),
        slot_of(last.timestamp)?.date(),
    )?;
    for (i, r) in records.iter().enumerate() {
        if i > 0 && r.timestamp < records[i - 1].timestamp {
            return Err(Error::Input(format!("timestamps out of order at {}", r.timestamp)));
        }
        series.push_reading(&slot_of(r.timestamp)?, r.demand)?;
    }
    Ok(series)
}

/// Gap-repair limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GapPolicy {
    /// Interior gaps up to this many hours are linearly interpolated;
    /// longer ones are copied from the same slot a week earlier.
    pub max_interp_len: usize,
    /// Longest gap tolerated at the very start or end of the series.
    pub max_edge_gap: usize,
}

impl Default for GapPolicy {
    fn default() -> Self {
        GapPolicy { max_interp_len: 3, max_edge_gap: 24 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleaningAction {
    DuplicateMean,
    Interpolate,
    WeekPrior,
    WeekAfter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleaningEntry {
    pub slot: String,
    pub action: CleaningAction,
    pub original: Option<Vec<f64>>,
    pub replacement: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub entries: Vec<CleaningEntry>,
}

impl CleaningReport {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One JSON object per line, in slot order of modification.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e)?);
            out.push('\n');
        }
        Ok(out)
    }
}

const WEEK: usize = 168;

/// Merge duplicated hours and fill gaps.
///
/// Duplicates become their arithmetic mean. Interior gaps of at most
/// `policy.max_interp_len` hours are interpolated linearly between their
/// neighbours; longer gaps, and edge gaps up to `policy.max_edge_gap`, take
/// the value of the same slot one week earlier (one week later when no
/// earlier week exists). Every modified slot is listed in the report.
pub fn clean_gaps(series: &HourlyLoadSeries, policy: &GapPolicy) -> Result<(HourlyLoadSeries, CleaningReport)> {
    let mut out = series.clone();
    let mut report = CleaningReport::default();

    for (index, extra) in out.take_duplicates() {
        let first = out.values()[index].expect("duplicate of a present reading");
        let mut readings = vec![first];
        readings.extend(extra);
        let mean = readings.iter().sum::<f64>() / readings.len() as f64;
        out.values_mut()[index] = Some(mean);
        report.entries.push(CleaningEntry {
            slot: series.slot_at(index).to_string(),
            action: CleaningAction::DuplicateMean,
            original: Some(readings),
            replacement: mean,
        });
    }

    let n = out.len();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < n {
        if out.values()[i].is_none() {
            let start = i;
            while i < n && out.values()[i].is_none() {
                i += 1;
            }
            runs.push((start, i));
        } else {
            i += 1;
        }
    }

    for (start, end) in runs {
        let len = end - start;
        let at_edge = start == 0 || end == n;
        if at_edge && len > policy.max_edge_gap {
            return Err(Error::UnrecoverableGap { start: series.slot_at(start).to_string(), len });
        }
        if !at_edge && len <= policy.max_interp_len {
            let left = out.values()[start - 1].unwrap();
            let right = out.values()[end].unwrap();
            for (k, idx) in (start..end).enumerate() {
                let v = left + (right - left) * (k + 1) as f64 / (len + 1) as f64;
                out.values_mut()[idx] = Some(v);
                report.entries.push(CleaningEntry {
                    slot: series.slot_at(idx).to_string(),
                    action: CleaningAction::Interpolate,
                    original: None,
                    replacement: v,
                });
            }
            continue;
        }
        for idx in start..end {
            let prior = idx.checked_sub(WEEK).and_then(|j| out.values()[j]);
            let (v, action) = match prior {
                Some(v) => (v, CleaningAction::WeekPrior),
                None => match out.values().get(idx + WEEK).copied().flatten() {
                    Some(v) => (v, CleaningAction::WeekAfter),
                    None => return Err(Error::UnrecoverableGap { start: series.slot_at(start).to_string(), len }),
                },
            };
            out.values_mut()[idx] = Some(v);
            report.entries.push(CleaningEntry {
                slot: series.slot_at(idx).to_string(),
                action,
                original: None,
                replacement: v,
            });
        }
    }
    Ok((out, report))
}

/// Total demand per calendar year. Every year the series touches must be
/// complete and gap-free.
pub fn aggregate_annual(series: &HourlyLoadSeries) -> Result<AnnualLoadSeries> {
    let mut totals = BTreeMap::new();
    for year in series.first_day().year()..=series.last_day().year() {
        let values = series.complete_year(year)?;
        totals.insert(year, values.iter().sum());
    }
    AnnualLoadSeries::new(series.country(), totals)
}

/// Totals for the complete calendar years only; partial edge years are
/// skipped.
pub fn aggregate_full_years(series: &HourlyLoadSeries) -> Result<AnnualLoadSeries> {
    let mut totals = BTreeMap::new();
    for year in series.full_years() {
        totals.insert(year, series.complete_year(year)?.iter().sum());
    }
    if totals.is_empty() {
        return Err(Error::Input("series contains no full calendar year".into()));
    }
    AnnualLoadSeries::new(series.country(), totals)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GdpFlag {
    Actual,
    Forecast,
}

/// GDP values by (report year, target year), i.e. one column per published
/// vintage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GdpTable {
    pub country: String,
    entries: BTreeMap<(i32, i32), (f64, GdpFlag)>,
}

impl GdpTable {
    pub fn new(country: impl Into<String>) -> Self {
        GdpTable { country: country.into(), entries: BTreeMap::new() }
    }

    /// A table holding realized values only, all filed under one report
    /// year. Used where no vintage history exists.
    pub fn from_realized(country: impl Into<String>, report_year: i32, values: &[(i32, f64)]) -> Result<Self> {
        let mut table = GdpTable::new(country);
        for &(year, gdp) in values {
            table.insert(report_year, year, gdp, Some(GdpFlag::Actual))?;
        }
        Ok(table)
    }

    /// Insert one value. Without an explicit flag, targets before the
    /// report year are actuals and the rest forecasts.
    pub fn insert(&mut self, report_year: i32, target_year: i32, gdp: f64, flag: Option<GdpFlag>) -> Result<()> {
        if !gdp.is_finite() {
            return Err(Error::Input(format!("GDP ({report_year},{target_year}) is not finite")));
        }
        let flag = flag.unwrap_or(if target_year >= report_year { GdpFlag::Forecast } else { GdpFlag::Actual });
        if self.entries.insert((report_year, target_year), (gdp, flag)).is_some() {
            return Err(Error::Input(format!("duplicate GDP entry for report {report_year}, target {target_year}")));
        }
        Ok(())
    }

    pub fn get(&self, report_year: i32, target_year: i32) -> Option<f64> {
        self.entries.get(&(report_year, target_year)).map(|e| e.0)
    }

    pub fn flag(&self, report_year: i32, target_year: i32) -> Option<GdpFlag> {
        self.entries.get(&(report_year, target_year)).map(|e| e.1)
    }

    /// (target year, value, flag) for one report vintage, by target year.
    pub fn vintage(&self, report_year: i32) -> impl Iterator<Item = (i32, f64, GdpFlag)> + '_ {
        self.entries.range((report_year, i32::MIN)..=(report_year, i32::MAX)).map(|(&(_, t), &(v, f))| (t, v, f))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Deserialize)]
struct GdpRow {
    report_year: i32,
    target_year: i32,
    gdp: f64,
    #[serde(default)]
    flag: Option<String>,
}

/// Read a GDP vintage table with columns `report_year,target_year,gdp[,flag]`.
pub fn load_gdp_table<R: Read>(reader: R, country: &str) -> Result<GdpTable> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(reader);
    let mut table = GdpTable::new(country);
    for row in csv.deserialize::<GdpRow>() {
        let row = row?;
        let flag = match row.flag.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("") => None,
            Some("actual") => Some(GdpFlag::Actual),
            Some("forecast") => Some(GdpFlag::Forecast),
            Some(other) => return Err(Error::Input(format!("unknown GDP flag {other:?}"))),
        };
        table.insert(row.report_year, row.target_year, row.gdp, flag)?;
    }
    if table.is_empty() {
        return Err(Error::Input("GDP table is empty".into()));
    }
    Ok(table)
}
