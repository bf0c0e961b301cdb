//! Run configuration: a TOML file with sections, overlaid by flags.
//!
//! Every section struct doubles as a clap argument group, so each flag
//! has the same name as its config key (with dashes for underscores).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use clap::{Args, ValueEnum};
use loadstab::ingest::{GapPolicy, HourLabel, LoadCsvSchema};
use loadstab::longterm::{SiSource, TrainingRule};
use loadstab::seasonality::{DayBasis, HourlyForm, SeasonalityOptions};
use loadstab::stability::StabilityConfig;
use loadstab::stats::TestFlavor;
use loadstab::{Error, Result, YearRange};
use serde::Deserialize;

/// Inclusive year window written `2004-2022`, or a single year.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Years(pub YearRange);

impl FromStr for Years {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i32>().map_err(|_| format!("bad year {t:?} in {s:?}"));
        let range = match s.split_once(['-', ':']).or_else(|| s.split_once("..")) {
            Some((a, b)) => YearRange::new(parse(a)?, parse(b.trim_start_matches('.'))?),
            None => Ok(YearRange::single(parse(s)?)),
        };
        range.map(Years).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Years {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for Years {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Year(i32),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Year(y) => Ok(Years(YearRange::single(y))),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoadFormat {
    /// Half-hourly MW readings, summed into hour-ending slots.
    HalfHourly,
    /// One reading per hour.
    Hourly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelArg {
    Ending,
    Beginning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlavorArg {
    Welch,
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DayBasisArg {
    Actual,
    Fixed365,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormArg {
    Verbal,
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiSourceArg {
    Baseline,
    Overall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrainingArg {
    ActualGdp,
    ThroughBaseline,
}

/// Overlay `self` (flags) on `base` (file), field by field.
macro_rules! overlay {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl $ty {
            pub fn overlay(self, base: $ty) -> $ty {
                $ty { $($field: self.$field.or(base.$field)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    /// Country identifier carried into outputs.
    #[arg(long)]
    pub country: Option<String>,
    /// Load CSV.
    #[arg(long)]
    pub load: Option<PathBuf>,
    /// GDP vintage CSV (report_year,target_year,gdp,flag).
    #[arg(long)]
    pub gdp: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<LoadFormat>,
    /// Interval labelling of hourly timestamps.
    #[arg(long, value_enum)]
    pub hour_label: Option<LabelArg>,
    #[arg(long)]
    pub timestamp_column: Option<String>,
    #[arg(long)]
    pub demand_column: Option<String>,
    #[arg(long)]
    pub timestamp_format: Option<String>,
    #[arg(long)]
    pub delimiter: Option<char>,
    #[arg(long)]
    pub max_interp_len: Option<usize>,
    #[arg(long)]
    pub max_edge_gap: Option<usize>,
    /// Directory receiving every output file.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

overlay!(DataSection {
    country,
    load,
    gdp,
    format,
    hour_label,
    timestamp_column,
    demand_column,
    timestamp_format,
    delimiter,
    max_interp_len,
    max_edge_gap,
    out_dir,
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeasonalitySection {
    /// Days per year in the monthly index denominator.
    #[arg(long, value_enum)]
    pub day_basis: Option<DayBasisArg>,
    /// Hourly index form: divide by or multiply with the overall indices.
    #[arg(long, value_enum)]
    pub form: Option<FormArg>,
}

overlay!(SeasonalitySection { day_basis, form });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilitySection {
    /// Years compared, e.g. 2004-2022. Defaults to every full year.
    #[arg(long)]
    pub years: Option<Years>,
    /// Overall δ (percent) at or above which the command exits with 1.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub epsilon_step: Option<f64>,
    #[arg(long)]
    pub epsilon_cap: Option<f64>,
    /// Significance level of each one-tailed test.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
}

overlay!(StabilitySection { years, threshold, epsilon_step, epsilon_cap, alpha, flavor });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LongSection {
    #[arg(long)]
    pub target_year: Option<i32>,
    /// Defaults to four years before the target.
    #[arg(long)]
    pub baseline_year: Option<i32>,
    /// GDP vintage; defaults to the baseline year.
    #[arg(long)]
    pub gdp_report_year: Option<i32>,
    /// Use this annual total instead of the GDP regression.
    #[arg(long)]
    pub annual_override: Option<f64>,
    #[arg(long, value_enum)]
    pub si_source: Option<SiSourceArg>,
    #[arg(long, value_enum)]
    pub training: Option<TrainingArg>,
    /// First day of the plot-data window.
    #[arg(long)]
    pub plot_from: Option<NaiveDate>,
    /// Last day of the plot-data window.
    #[arg(long)]
    pub plot_to: Option<NaiveDate>,
}

overlay!(LongSection {
    target_year,
    baseline_year,
    gdp_report_year,
    annual_override,
    si_source,
    training,
    plot_from,
    plot_to,
});

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShortSection {
    /// Evaluation window, e.g. 2018-2022. The year before is warm-up.
    #[arg(long)]
    pub year: Option<Years>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Pick α and β by exhaustive search on the window.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub grid_search: Option<bool>,
    /// Years feeding the seasonal factors; defaults to every full year
    /// before the window.
    #[arg(long)]
    pub si_years: Option<Years>,
    #[arg(long)]
    pub plot_from: Option<NaiveDate>,
    #[arg(long)]
    pub plot_to: Option<NaiveDate>,
}

overlay!(ShortSection { year, alpha, beta, grid_search, si_years, plot_from, plot_to });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluateSection {
    /// Forecast CSV with `slot,forecast` columns.
    #[arg(long)]
    pub forecast: Option<PathBuf>,
}

overlay!(EvaluateSection { forecast });

/// Contents of a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub data: DataSection,
    pub seasonality: SeasonalitySection,
    pub stability: StabilitySection,
    pub long: LongSection,
    pub short: ShortSection,
    pub evaluate: EvaluateSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?;
        let dir = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.data.load, &mut cfg.data.gdp, &mut cfg.data.out_dir, &mut cfg.evaluate.forecast]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Where and how to read the load data.
#[derive(Debug, Clone)]
pub struct DataConfig {
    pub country: String,
    pub load: PathBuf,
    pub gdp: Option<PathBuf>,
    pub format: LoadFormat,
    pub hour_label: HourLabel,
    pub schema: LoadCsvSchema,
    pub gaps: GapPolicy,
    pub out_dir: PathBuf,
}

impl DataSection {
    pub fn resolve(self) -> Result<DataConfig> {
        let load = self.load.ok_or_else(|| Error::Config("no load file given (--load or data.load)".into()))?;
        let defaults = LoadCsvSchema::default();
        let gap_defaults = GapPolicy::default();
        Ok(DataConfig {
            country: self.country.unwrap_or_else(|| "unknown".into()),
            load,
            gdp: self.gdp,
            format: self.format.unwrap_or(LoadFormat::Hourly),
            hour_label: match self.hour_label.unwrap_or(LabelArg::Ending) {
                LabelArg::Ending => HourLabel::Ending,
                LabelArg::Beginning => HourLabel::Beginning,
            },
            schema: LoadCsvSchema {
                timestamp_column: self.timestamp_column.unwrap_or(defaults.timestamp_column),
                demand_column: self.demand_column.unwrap_or(defaults.demand_column),
                timestamp_format: self.timestamp_format.unwrap_or(defaults.timestamp_format),
                delimiter: self.delimiter.unwrap_or(defaults.delimiter),
            },
            gaps: GapPolicy {
                max_interp_len: self.max_interp_len.unwrap_or(gap_defaults.max_interp_len),
                max_edge_gap: self.max_edge_gap.unwrap_or(gap_defaults.max_edge_gap),
            },
            out_dir: self.out_dir.unwrap_or_else(|| PathBuf::from("out")),
        })
    }
}

impl SeasonalitySection {
    pub fn resolve(&self) -> SeasonalityOptions {
        SeasonalityOptions {
            day_basis: match self.day_basis.unwrap_or(DayBasisArg::Actual) {
                DayBasisArg::Actual => DayBasis::ActualDays,
                DayBasisArg::Fixed365 => DayBasis::Fixed365,
            },
            form: match self.form.unwrap_or(FormArg::Verbal) {
                FormArg::Verbal => HourlyForm::Verbal,
                FormArg::Symbolic => HourlyForm::Symbolic,
            },
        }
    }
}

impl StabilitySection {
    pub fn resolve(&self) -> Result<StabilityConfig> {
        let d = StabilityConfig::default();
        let cfg = StabilityConfig {
            epsilon_step: self.epsilon_step.unwrap_or(d.epsilon_step),
            epsilon_cap: self.epsilon_cap.unwrap_or(d.epsilon_cap),
            alpha: self.alpha.unwrap_or(d.alpha),
            flavor: match self.flavor.unwrap_or(FlavorArg::Welch) {
                FlavorArg::Welch => TestFlavor::Welch,
                FlavorArg::Pooled => TestFlavor::Pooled,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl LongSection {
    pub fn si_source(&self) -> SiSource {
        match self.si_source.unwrap_or(SiSourceArg::Baseline) {
            SiSourceArg::Baseline => SiSource::BaselineYearSpecific,
            SiSourceArg::Overall => SiSource::OverallTrainingMean,
        }
    }

    pub fn training(&self) -> TrainingRule {
        match self.training.unwrap_or(TrainingArg::ActualGdp) {
            TrainingArg::ActualGdp => TrainingRule::ActualGdpOnly,
            TrainingArg::ThroughBaseline => TrainingRule::ThroughBaseline,
        }
    }
}
