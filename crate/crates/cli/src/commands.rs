use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::path::PathBuf;

use chrono::NaiveDate;
use loadstab::calendar::CalendarSlot;
use loadstab::ingest::{
    aggregate_full_years, clean_gaps, halfhourly_to_hourly, load_gdp_table, native_hourly_series, parse_load_csv,
    CleaningReport, GdpTable,
};
use loadstab::longterm::{mape, run_long_term, ForecastSpec, LongTermOptions};
use loadstab::report::{
    boxplot_csv, fmt_sig, forecast_csv, hourly_series_csv, hourly_si_csv, hourly_si_json, monthly_si_csv,
    slot_table_csv, stability_json, to_report_json, weekday_si_csv,
};
use loadstab::seasonality::{si_boxplot_data, SeasonalityIndexSet};
use loadstab::shortterm::{day_ahead_path, evaluate_day_ahead, grid_search, SeasonalFactors, SmoothingConfig};
use loadstab::stability::stability_report;
use loadstab::{Error, HourlyLoadSeries, Result, YearRange};
use serde::Serialize;

use crate::config::{
    DataConfig, EvaluateSection, LoadFormat, LongSection, SeasonalitySection, ShortSection, StabilitySection,
};
use crate::output::Outputs;

/// Files to write and the exit status the command settled on.
pub struct Outcome {
    pub outputs: Outputs,
    pub inputs: Vec<PathBuf>,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(outputs: Outputs, inputs: Vec<PathBuf>) -> Self {
        Outcome { outputs, inputs, exit_code: 0 }
    }
}

struct Loaded {
    series: HourlyLoadSeries,
    cleaning: CleaningReport,
    records: usize,
}

fn load_series(data: &DataConfig) -> Result<Loaded> {
    let file = File::open(&data.load).map_err(|e| Error::io(&data.load, e))?;
    let parsed = parse_load_csv(file, &data.schema)
        .and_then(|p| p.into_strict())
        .map_err(|e| Error::Input(format!("{}: {e}", data.load.display())))?;
    let raw = match data.format {
        LoadFormat::HalfHourly => halfhourly_to_hourly(&parsed, &data.country)?,
        LoadFormat::Hourly => native_hourly_series(&parsed, &data.country, data.hour_label)?,
    };
    let (series, cleaning) = clean_gaps(&raw, &data.gaps)?;
    Ok(Loaded { series, cleaning, records: parsed.len() })
}

fn load_gdp(data: &DataConfig) -> Result<Option<GdpTable>> {
    data.gdp
        .as_ref()
        .map(|path| {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            load_gdp_table(file, &data.country)
        })
        .transpose()
}

fn full_year_range(series: &HourlyLoadSeries) -> Result<YearRange> {
    let years = series.full_years();
    match (years.first(), years.last()) {
        (Some(&a), Some(&b)) => YearRange::new(a, b),
        _ => Err(Error::Input("series contains no full calendar year".into())),
    }
}

fn inputs(data: &DataConfig) -> Vec<PathBuf> {
    std::iter::once(data.load.clone()).chain(data.gdp.clone()).collect()
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    country: &'a str,
    convention: loadstab::UnitConvention,
    records: usize,
    first_day: NaiveDate,
    last_day: NaiveDate,
    hours: usize,
    full_years: Vec<i32>,
    cleaned_slots: usize,
    annual_totals: BTreeMap<i32, f64>,
}

pub fn ingest(data: &DataConfig) -> Result<Outcome> {
    let loaded = load_series(data)?;
    let s = &loaded.series;
    let summary = IngestSummary {
        country: &data.country,
        convention: s.convention(),
        records: loaded.records,
        first_day: s.first_day(),
        last_day: s.last_day(),
        hours: s.len(),
        full_years: s.full_years(),
        cleaned_slots: loaded.cleaning.len(),
        annual_totals: aggregate_full_years(s).map(|a| a.totals).unwrap_or_default(),
    };
    let mut out = Outputs::default();
    out.add("hourly.csv", hourly_series_csv(s));
    out.add("cleaning_report.jsonl", loaded.cleaning.to_json_lines()?);
    out.add("ingest.json", to_report_json(&summary)?);
    println!(
        "{}: {} hourly slots {}..{}, {} cleaned",
        data.country,
        s.len(),
        s.first_day(),
        s.last_day(),
        loaded.cleaning.len()
    );
    Ok(Outcome::ok(out, inputs(data)))
}

pub fn stability(data: &DataConfig, seasonality: &SeasonalitySection, section: &StabilitySection) -> Result<Outcome> {
    let loaded = load_series(data)?;
    let years = match section.years {
        Some(y) => y.0,
        None => full_year_range(&loaded.series)?,
    };
    let cfg = section.resolve()?;
    let si = SeasonalityIndexSet::compute(&loaded.series, years, seasonality.resolve())?;
    let report = stability_report(&si.hourly, years, &cfg)?;

    let mut out = Outputs::default();
    out.add("si_monthly.csv", monthly_si_csv(&si));
    out.add("si_weekday.csv", weekday_si_csv(&si));
    out.add("si_hourly.csv", hourly_si_csv(&si));
    out.add("si_hourly.json", hourly_si_json(&si)?);
    out.add("si_boxplot.csv", boxplot_csv(&si_boxplot_data(&si.hourly)?));
    out.add("mu.csv", slot_table_csv(&report.mu, false));
    out.add("epsilon_hat.csv", slot_table_csv(&report.epsilon.max, false));
    out.add("delta.csv", slot_table_csv(&report.delta, true));
    out.add("delta_of_mean.csv", slot_table_csv(&report.delta_of_mean, true));
    out.add("stability.json", stability_json(&report, section.threshold)?);

    println!(
        "{} {years}: overall δ {}% (weekday {}%, weekend {}%)",
        data.country,
        fmt_sig(report.delta.overall_mean()),
        fmt_sig(report.delta.weekday_mean()),
        fmt_sig(report.delta.weekend_mean())
    );
    if report.epsilon.any_capped() {
        eprintln!("warning: some slots reached the ε cap of {}", cfg.epsilon_cap);
    }
    let exit_code = match section.threshold {
        Some(t) if !report.is_stable(t) => {
            println!("not stable at threshold {t}%");
            1
        }
        _ => 0,
    };
    Ok(Outcome { outputs: out, inputs: inputs(data), exit_code })
}

fn in_window(date: NaiveDate, from: Option<NaiveDate>, to: Option<NaiveDate>) -> bool {
    from.is_none_or(|f| date >= f) && to.is_none_or(|t| date <= t)
}

fn plot_row(out: &mut String, slot: CalendarSlot, actual: Option<f64>, forecast: f64, base: f64) {
    let _ = writeln!(
        out,
        "{},{},{},{}",
        slot.hour_ending().format("%Y-%m-%d %H:%M"),
        actual.map(fmt_sig).unwrap_or_default(),
        fmt_sig(forecast),
        fmt_sig(base)
    );
}

const PLOT_HEADER: &str = "datetime,actual,forecast,base\n";

#[derive(Serialize)]
struct LongSummary<'a> {
    country: &'a str,
    spec: ForecastSpec,
    training_rule: loadstab::longterm::TrainingRule,
    si_years: YearRange,
    fit: Option<&'a loadstab::longterm::AnnualFit>,
    annual_forecast: f64,
    annual_override: bool,
    deseasonalized_base: f64,
    forecast_total: f64,
    evaluation: Option<&'a loadstab::longterm::EvaluationResult>,
}

pub fn forecast_long(data: &DataConfig, seasonality: &SeasonalitySection, section: &LongSection) -> Result<Outcome> {
    let target = section
        .target_year
        .ok_or_else(|| Error::Config("no target year given (--target-year or long.target_year)".into()))?;
    let baseline = section.baseline_year.unwrap_or(target - 4);
    let spec = ForecastSpec {
        target_year: target,
        baseline_year: baseline,
        gdp_report_year: section.gdp_report_year.unwrap_or(baseline),
        si_source: section.si_source(),
    };
    let loaded = load_series(data)?;
    let gdp = load_gdp(data)?;
    if gdp.is_none() && section.annual_override.is_none() {
        return Err(Error::Config("a GDP file (--gdp) or --annual-override is required".into()));
    }
    let options = LongTermOptions { seasonality: seasonality.resolve(), training: section.training() };
    let annual = aggregate_full_years(&loaded.series)?;
    let run = run_long_term(&loaded.series, &annual, gdp.as_ref(), &spec, options, section.annual_override)?;

    let summary = LongSummary {
        country: &data.country,
        spec,
        training_rule: options.training,
        si_years: run.training_years,
        fit: run.fit.as_ref(),
        annual_forecast: run.annual_forecast,
        annual_override: section.annual_override.is_some(),
        deseasonalized_base: run.forecast.deseasonalized_base,
        forecast_total: run.forecast.total(),
        evaluation: run.evaluation.as_ref(),
    };
    let mut plot = String::from(PLOT_HEADER);
    for (slot, f) in run.forecast.iter() {
        if in_window(slot.date(), section.plot_from, section.plot_to) {
            plot_row(&mut plot, slot, loaded.series.get(&slot), f, run.forecast.deseasonalized_base);
        }
    }
    let mut out = Outputs::default();
    out.add("long_forecast.csv", forecast_csv(&run.forecast));
    out.add("long_evaluation.json", to_report_json(&summary)?);
    out.add("long_plot.csv", plot);

    print!("{} {target} from baseline {baseline}: annual {}", data.country, fmt_sig(run.annual_forecast));
    match &run.evaluation {
        Some(e) => println!(", yearly error {}%, hourly MAPE {}%", fmt_sig(e.yearly_pct_error), fmt_sig(e.hourly_mape)),
        None => println!(" (no actuals for {target})"),
    }
    Ok(Outcome::ok(out, inputs(data)))
}

#[derive(Serialize)]
struct ShortSummary<'a> {
    country: &'a str,
    window: YearRange,
    si_years: YearRange,
    grid_search: Option<loadstab::shortterm::GridSearchResult>,
    alpha: f64,
    beta: f64,
    mape: f64,
    per_year: &'a [(i32, f64)],
}

pub fn forecast_short(data: &DataConfig, seasonality: &SeasonalitySection, section: &ShortSection) -> Result<Outcome> {
    let window = section.year.ok_or_else(|| Error::Config("no evaluation year given (--year or short.year)".into()))?.0;
    let search = section.grid_search.unwrap_or(false);
    if !search && (section.alpha.is_none() || section.beta.is_none()) {
        return Err(Error::Config("give both --alpha and --beta, or --grid-search".into()));
    }
    let loaded = load_series(data)?;
    let si_years = match section.si_years {
        Some(y) => y.0,
        None => {
            let first = full_year_range(&loaded.series)?.first;
            YearRange::new(first, window.first - 1)
                .map_err(|_| Error::Input(format!("no full year before {window} for the seasonal factors")))?
        }
    };
    let si = SeasonalityIndexSet::compute(&loaded.series, si_years, seasonality.resolve())?;
    let factors = SeasonalFactors::from_indices(&si)?;
    let template = SmoothingConfig::new(section.alpha.unwrap_or(0.0), section.beta.unwrap_or(0.0), factors);

    let grid = if search { Some(grid_search(&loaded.series, &template, window)?) } else { None };
    let cfg = match &grid {
        Some(g) => SmoothingConfig { alpha: g.alpha, beta: g.beta, ..template },
        None => template,
    };
    let result = evaluate_day_ahead(&loaded.series, &cfg, window)?;
    let path = day_ahead_path(&loaded.series, &cfg, window)?;

    let mut daily = String::from("date,mape\n");
    for d in &result.daily {
        let _ = writeln!(daily, "{},{}", d.date, fmt_sig(d.mape));
    }
    let mut plot = String::from(PLOT_HEADER);
    for i in 0..path.forecast.len() {
        let slot = path.slot_at(i);
        if in_window(slot.date(), section.plot_from, section.plot_to) {
            plot_row(&mut plot, slot, Some(path.actual[i]), path.forecast[i], path.base[i]);
        }
    }
    let summary = ShortSummary {
        country: &data.country,
        window,
        si_years,
        grid_search: grid,
        alpha: cfg.alpha,
        beta: cfg.beta,
        mape: result.mape,
        per_year: &result.per_year,
    };
    let mut out = Outputs::default();
    out.add("short_daily_mape.csv", daily);
    out.add("short_summary.json", to_report_json(&summary)?);
    out.add("short_plot.csv", plot);

    println!("{} {window}: α {} β {}, day-ahead MAPE {}%", data.country, cfg.alpha, cfg.beta, fmt_sig(result.mape));
    for (y, m) in &result.per_year {
        println!("  {y}: {}%", fmt_sig(*m));
    }
    Ok(Outcome::ok(out, inputs(data)))
}

fn parse_slot(text: &str) -> Option<CalendarSlot> {
    let (date, time) = text.trim().split_once(' ')?;
    let date = NaiveDate::parse_from_str(date, "%Y-%m-%d").ok()?;
    let (hour, minute) = time.split_once(':')?;
    if minute != "00" {
        return None;
    }
    let hour: u32 = hour.parse().ok()?;
    (1..=24).contains(&hour).then(|| CalendarSlot::new(date, hour))
}

#[derive(Serialize)]
struct Evaluation<'a> {
    country: &'a str,
    forecast_file: String,
    slots: usize,
    missing_actual: usize,
    excluded_zero_actual: usize,
    actual_total: f64,
    forecast_total: f64,
    total_pct_error: f64,
    mape: f64,
    per_month_mape: BTreeMap<String, f64>,
}

/// Score an arbitrary `slot,forecast` CSV against the load data.
pub fn evaluate(data: &DataConfig, section: &EvaluateSection) -> Result<Outcome> {
    let path = section
        .forecast
        .clone()
        .ok_or_else(|| Error::Config("no forecast file given (--forecast or evaluate.forecast)".into()))?;
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    let loaded = load_series(data)?;

    let mut reader = csv::Reader::from_reader(file);
    let mut by_month: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let (mut actual, mut forecast) = (Vec::new(), Vec::new());
    let mut slots = 0;
    let mut missing = 0;
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let bad = |what: &str| Error::Input(format!("{}: line {line}: bad {what}", path.display()));
        let slot = row.get(0).and_then(parse_slot).ok_or_else(|| bad("slot"))?;
        let f: f64 = row.get(1).and_then(|v| v.trim().parse().ok()).ok_or_else(|| bad("forecast"))?;
        slots += 1;
        let Some(a) = loaded.series.get(&slot) else {
            missing += 1;
            continue;
        };
        actual.push(a);
        forecast.push(f);
        let month = by_month.entry(slot.date().format("%Y-%m").to_string()).or_default();
        month.0.push(a);
        month.1.push(f);
    }
    if actual.is_empty() {
        return Err(Error::EmptyPeriod(format!("{}: no forecast slot has an actual value", path.display())));
    }
    let (overall, skipped) = mape(&actual, &forecast);
    let actual_total: f64 = actual.iter().sum();
    let forecast_total: f64 = forecast.iter().sum();
    let eval = Evaluation {
        country: &data.country,
        forecast_file: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        slots,
        missing_actual: missing,
        excluded_zero_actual: skipped,
        actual_total,
        forecast_total,
        total_pct_error: 100.0 * (actual_total - forecast_total).abs() / actual_total,
        mape: overall,
        per_month_mape: by_month.into_iter().map(|(k, (a, f))| (k, mape(&a, &f).0)).collect(),
    };
    let mut out = Outputs::default();
    out.add("evaluation.json", to_report_json(&eval)?);
    println!(
        "{}: {} slots scored, MAPE {}%, total error {}%",
        data.country,
        actual.len(),
        fmt_sig(eval.mape),
        fmt_sig(eval.total_pct_error)
    );
    let mut used = inputs(data);
    used.push(path);
    Ok(Outcome::ok(out, used))
}
