//! Stability-verified long-term hourly electricity load forecasting.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`ingest`] parses raw load and GDP tables, converts half-hourly
//!    readings to the summed hour-ending convention and repairs gaps.
//! 2. [`seasonality`] builds the month / weekday / hour seasonality-index
//!    hierarchy and its overall means.
//! 3. [`stability`] runs the ε-sweep equivalence tests between every pair
//!    of years and reports ε̂ and δ per (weekday, hour).
//! 4. [`longterm`] regresses annual load on GDP and disaggregates the
//!    annual forecast to hours with baseline-year seasonality indices.
//! 5. [`shortterm`] is a triple-seasonal exponential smoother with constant
//!    seasonal factors, evaluated day-ahead.
//!
//! [`stats`] holds the statistical kernel shared by the stages and
//! [`report`] the CSV / JSON emitters. [`reference`] carries published
//! benchmark tables and [`synthetic`] seeded test series.

pub mod calendar;
pub mod error;
pub mod ingest;
pub mod longterm;
pub mod reference;
pub mod report;
pub mod seasonality;
pub mod series;
pub mod shortterm;
pub mod stability;
pub mod stats;
pub mod synthetic;

pub use calendar::{CalendarSlot, YearRange};
pub use error::{Error, Result};
pub use series::{AnnualLoadSeries, HourlyLoadSeries, UnitConvention};
