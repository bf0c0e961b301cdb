//! Published benchmark values for Singapore, Belgium and Bulgaria.
//!
//! The weekday × hour tables and the annual series are shipped as CSV files
//! under `data/` and embedded at compile time.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{load_gdp_table, GdpTable};
use crate::stability::SlotTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Country {
    Singapore,
    Belgium,
    Bulgaria,
}

impl Country {
    pub const ALL: [Country; 3] = [Country::Singapore, Country::Belgium, Country::Bulgaria];

    pub fn name(self) -> &'static str {
        match self {
            Country::Singapore => "singapore",
            Country::Belgium => "belgium",
            Country::Bulgaria => "bulgaria",
        }
    }
}

impl fmt::Display for Country {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Country {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "singapore" | "sg" => Ok(Country::Singapore),
            "belgium" | "be" => Ok(Country::Belgium),
            "bulgaria" | "bg" => Ok(Country::Bulgaria),
            other => Err(Error::Config(format!("unknown country {other:?}"))),
        }
    }
}

const SG_MU: &str = include_str!("../data/singapore_mu.csv");
const SG_EPS: &str = include_str!("../data/singapore_epsilon_hat.csv");
const SG_DELTA: &str = include_str!("../data/singapore_delta.csv");
const BE_MU: &str = include_str!("../data/belgium_mu.csv");
const BE_EPS: &str = include_str!("../data/belgium_epsilon_hat.csv");
const BE_DELTA: &str = include_str!("../data/belgium_delta.csv");
const BG_MU: &str = include_str!("../data/bulgaria_mu.csv");
const BG_EPS: &str = include_str!("../data/bulgaria_epsilon_hat.csv");
const BG_DELTA: &str = include_str!("../data/bulgaria_delta.csv");
const SG_ANNUAL: &str = include_str!("../data/singapore_annual.csv");
const BE_ANNUAL: &str = include_str!("../data/belgium_annual.csv");
const BG_ANNUAL: &str = include_str!("../data/bulgaria_annual.csv");
pub const SINGAPORE_GDP_VINTAGES_CSV: &str = include_str!("../data/singapore_gdp_vintages.csv");

/// A published weekday × hour table with optional aggregate columns
/// (weekday, weekend, week) and an overall row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublishedTable {
    pub slots: SlotTable,
    /// Per hour: Monday–Friday, Saturday–Sunday and all-week means.
    pub hour_aggregates: Option<[[f64; 3]; 24]>,
    /// Per weekday followed by the three aggregates.
    pub overall: Option<[f64; 10]>,
}

fn hour_key(label: &str) -> Result<usize> {
    let h: usize = label.parse().map_err(|_| Error::Input(format!("bad hour label {label:?}")))?;
    if (1..=24).contains(&h) {
        Ok(h - 1)
    } else {
        Err(Error::Input(format!("hour {h} outside 1..=24")))
    }
}

fn parse_table(text: &str) -> Result<PublishedTable> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let width = reader.headers()?.len();
    let mut slots = [[f64::NAN; 24]; 7];
    let mut aggregates = [[f64::NAN; 3]; 24];
    let mut overall = None;
    for record in reader.records() {
        let record = record?;
        let values: Vec<f64> = record
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>().map_err(|_| Error::Input(format!("bad number {v:?}"))))
            .collect::<Result<_>>()?;
        if &record[0] == "overall" {
            let mut row = [0.0; 10];
            row[..values.len()].copy_from_slice(&values);
            overall = Some(row);
            continue;
        }
        let h = hour_key(&record[0])?;
        for d in 0..7 {
            slots[d][h] = values[d];
        }
        if width == 11 {
            aggregates[h].copy_from_slice(&values[7..10]);
        }
    }
    Ok(PublishedTable { slots: SlotTable(slots), hour_aggregates: (width == 11).then_some(aggregates), overall })
}

fn texts(country: Country) -> (&'static str, &'static str, &'static str) {
    match country {
        Country::Singapore => (SG_MU, SG_EPS, SG_DELTA),
        Country::Belgium => (BE_MU, BE_EPS, BE_DELTA),
        Country::Bulgaria => (BG_MU, BG_EPS, BG_DELTA),
    }
}

/// Mean hourly index μ^{d,h}, three decimals.
pub fn published_mu(country: Country) -> SlotTable {
    parse_table(texts(country).0).expect("embedded table parses").slots
}

/// ε̂ per slot, three decimals.
pub fn published_epsilon_hat(country: Country) -> SlotTable {
    parse_table(texts(country).1).expect("embedded table parses").slots
}

/// δ per slot in percent, with its aggregate columns and overall row.
pub fn published_delta(country: Country) -> PublishedTable {
    parse_table(texts(country).2).expect("embedded table parses")
}

/// Years over which the published stability tables were computed.
pub fn stability_years(country: Country) -> (i32, i32) {
    match country {
        Country::Singapore => (2004, 2022),
        Country::Belgium | Country::Bulgaria => (2006, 2017),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnualRecord {
    pub year: i32,
    pub demand_twh: f64,
    pub gdp_usd: f64,
}

/// Annual electricity demand and nominal GDP.
pub fn annual_demand_gdp(country: Country) -> Vec<AnnualRecord> {
    let text = match country {
        Country::Singapore => SG_ANNUAL,
        Country::Belgium => BE_ANNUAL,
        Country::Bulgaria => BG_ANNUAL,
    };
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .expect("embedded annual table parses")
}

/// Published Pearson correlation between annual demand and GDP.
pub fn published_pearson(country: Country) -> f64 {
    match country {
        Country::Singapore => 0.9947,
        Country::Belgium => 0.8084,
        Country::Bulgaria => 0.9204,
    }
}

/// IMF GDP vintages for Singapore (billion USD), report years 2013–2018.
pub fn singapore_gdp_vintages() -> GdpTable {
    load_gdp_table(SINGAPORE_GDP_VINTAGES_CSV.as_bytes(), "singapore").expect("embedded vintages parse")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PublishedRegression {
    pub baseline_year: i32,
    pub intercept: f64,
    pub se_intercept: f64,
    pub slope: f64,
    pub se_slope: f64,
    pub r_squared: f64,
}

/// Annual load on GDP, one model per baseline year.
pub const SINGAPORE_REGRESSIONS: [PublishedRegression; 6] = [
    PublishedRegression {
        baseline_year: 2013,
        intercept: 60_170_382.0,
        se_intercept: 1_450_000.0,
        slope: 123_370.0,
        se_slope: 7_298.0,
        r_squared: 0.976,
    },
    PublishedRegression {
        baseline_year: 2014,
        intercept: 61_109_978.0,
        se_intercept: 1_270_000.0,
        slope: 115_679.0,
        se_slope: 5_936.0,
        r_squared: 0.979,
    },
    PublishedRegression {
        baseline_year: 2015,
        intercept: 60_914_095.0,
        se_intercept: 1_260_000.0,
        slope: 116_795.0,
        se_slope: 5_598.0,
        r_squared: 0.980,
    },
    PublishedRegression {
        baseline_year: 2016,
        intercept: 59_824_815.0,
        se_intercept: 1_770_000.0,
        slope: 123_719.0,
        se_slope: 7_640.0,
        r_squared: 0.963,
    },
    PublishedRegression {
        baseline_year: 2017,
        intercept: 58_950_915.0,
        se_intercept: 2_230_000.0,
        slope: 129_157.0,
        se_slope: 9_359.0,
        r_squared: 0.945,
    },
    PublishedRegression {
        baseline_year: 2018,
        intercept: 58_765_829.0,
        se_intercept: 1_860_000.0,
        slope: 129_589.0,
        se_slope: 7_520.0,
        r_squared: 0.961,
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PublishedLongTerm {
    pub year: i32,
    pub actual: f64,
    pub forecast: f64,
    pub yearly_error: f64,
    pub hourly_mape: f64,
}

/// Five-year-ahead backtests, summed-half-hour units.
pub const SINGAPORE_LONG_TERM: [PublishedLongTerm; 6] = [
    PublishedLongTerm {
        year: 2017,
        actual: 103_147_207.0,
        forecast: 101_485_969.0,
        yearly_error: 1.61,
        hourly_mape: 5.11,
    },
    PublishedLongTerm {
        year: 2018,
        actual: 107_482_983.0,
        forecast: 102_284_277.0,
        yearly_error: 4.84,
        hourly_mape: 5.46,
    },
    PublishedLongTerm {
        year: 2019,
        actual: 107_965_323.0,
        forecast: 104_135_499.0,
        yearly_error: 3.55,
        hourly_mape: 5.58,
    },
    PublishedLongTerm {
        year: 2020,
        actual: 105_666_163.0,
        forecast: 102_751_430.0,
        yearly_error: 2.76,
        hourly_mape: 6.03,
    },
    PublishedLongTerm {
        year: 2021,
        actual: 111_352_369.0,
        forecast: 104_536_553.0,
        yearly_error: 6.12,
        hourly_mape: 6.87,
    },
    PublishedLongTerm {
        year: 2022,
        actual: 113_587_819.0,
        forecast: 112_539_730.0,
        yearly_error: 0.92,
        hourly_mape: 4.35,
    },
];

/// Utility's own 2018 annual forecast (53,000 GWh, doubled to the summed
/// half-hour convention) and the hourly MAPE it yields.
pub const SINGAPORE_OVERRIDE_2018_TOTAL: f64 = 106_000_000.0;
pub const SINGAPORE_OVERRIDE_2018_MAPE: f64 = 4.9;

/// Two-year-ahead hourly MAPE for 2019 from baseline 2017.
pub fn published_two_year_mape(country: Country) -> Option<f64> {
    match country {
        Country::Singapore => None,
        Country::Belgium => Some(6.81),
        Country::Bulgaria => Some(5.64),
    }
}

pub const SHORT_TERM_YEARS: [i32; 5] = [2018, 2019, 2020, 2021, 2022];

/// Day-ahead yearly MAPE (%) for [`SHORT_TERM_YEARS`], by method.
#[allow(clippy::approx_constant)]
pub const SHORT_TERM_MAPE: [(&str, [f64; 5]); 5] = [
    ("ES (Constant SI)", [2.81, 3.32, 5.41, 3.52, 3.14]),
    ("FB Prophet", [3.65, 3.14, 4.35, 5.26, 6.15]),
    ("SARIMAX", [6.22, 4.94, 4.41, 7.45, 5.40]),
    ("MSTL + AutoARIMA", [3.35, 3.36, 4.49, 5.06, 2.85]),
    ("Dynamic Harmonic Regression", [3.61, 3.56, 4.54, 6.42, 3.27]),
];

pub const SHORT_TERM_ALPHA: f64 = 0.19;
pub const SHORT_TERM_BETA: f64 = 0.88;
