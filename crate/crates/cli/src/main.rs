//! `loadstab`: ingest load data, test seasonality-index stability and run
//! long- and short-term forecasts.
//!
//! Exit status: 0 on success, 1 when a stability threshold is missed,
//! 2 on bad input or configuration.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{
    DataSection, EvaluateSection, FileConfig, LongSection, SeasonalitySection, ShortSection, StabilitySection,
};

#[derive(Parser)]
#[command(name = "loadstab", version, about = "Seasonality stability and hourly load forecasting")]
struct Cli {
    /// TOML config; flags override its keys.
    #[arg(long, global = true, env = "LOADSTAB_CONFIG")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, hourly-align and gap-fill a load file.
    Ingest {
        #[command(flatten)]
        data: DataSection,
    },
    /// Seasonality indices, ε̂ and δ tables.
    Stability {
        #[command(flatten)]
        data: DataSection,
        #[command(flatten)]
        seasonality: SeasonalitySection,
        #[command(flatten)]
        stability: StabilitySection,
    },
    /// GDP-regression annual forecast spread over the target year's hours.
    ForecastLong {
        #[command(flatten)]
        data: DataSection,
        #[command(flatten)]
        seasonality: SeasonalitySection,
        #[command(flatten)]
        long: LongSection,
    },
    /// Rolling day-ahead exponential smoothing.
    ForecastShort {
        #[command(flatten)]
        data: DataSection,
        #[command(flatten)]
        seasonality: SeasonalitySection,
        #[command(flatten)]
        short: ShortSection,
    },
    /// Score a forecast CSV against the load data.
    Evaluate {
        #[command(flatten)]
        data: DataSection,
        #[command(flatten)]
        evaluate: EvaluateSection,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest { .. } => "ingest",
            Command::Stability { .. } => "stability",
            Command::ForecastLong { .. } => "forecast-long",
            Command::ForecastShort { .. } => "forecast-short",
            Command::Evaluate { .. } => "evaluate",
        }
    }
}

fn run(cli: Cli) -> loadstab::Result<u8> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let name = cli.command.name();
    let (data, outcome) = match cli.command {
        Command::Ingest { data } => {
            let data = data.overlay(file.data).resolve()?;
            let outcome = commands::ingest(&data)?;
            (data, outcome)
        }
        Command::Stability { data, seasonality, stability } => {
            let data = data.overlay(file.data).resolve()?;
            let outcome =
                commands::stability(&data, &seasonality.overlay(file.seasonality), &stability.overlay(file.stability))?;
            (data, outcome)
        }
        Command::ForecastLong { data, seasonality, long } => {
            let data = data.overlay(file.data).resolve()?;
            let outcome =
                commands::forecast_long(&data, &seasonality.overlay(file.seasonality), &long.overlay(file.long))?;
            (data, outcome)
        }
        Command::ForecastShort { data, seasonality, short } => {
            let data = data.overlay(file.data).resolve()?;
            let outcome =
                commands::forecast_short(&data, &seasonality.overlay(file.seasonality), &short.overlay(file.short))?;
            (data, outcome)
        }
        Command::Evaluate { data, evaluate } => {
            let data = data.overlay(file.data).resolve()?;
            let outcome = commands::evaluate(&data, &evaluate.overlay(file.evaluate))?;
            (data, outcome)
        }
    };
    let names: Vec<String> = outcome.outputs.names().map(str::to_string).collect();
    outcome.outputs.write(&data.out_dir, name, &outcome.inputs, outcome.exit_code)?;
    println!("wrote {} file(s) to {}", names.len(), data.out_dir.display());
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
