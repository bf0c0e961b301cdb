use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("{count} row(s) failed to parse; first at line {first_line}: {first_message}")]
    Rows { count: usize, first_line: u64, first_message: String },

    #[error("unrecoverable gap of {len} hour(s) starting at {start}")]
    UnrecoverableGap { start: String, len: usize },

    #[error("year {0} is not fully covered by the series")]
    PartialYear(i32),

    #[error("no data for {0}")]
    EmptyPeriod(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular design: the regressor is constant")]
    SingularDesign,

    #[error("correlation undefined: input is constant")]
    UndefinedCorrelation,

    #[error("no GDP value for target year {target} in the {report} report vintage")]
    MissingGdp { report: i32, target: i32 },

    #[error("missing seasonality index: {0}")]
    MissingSi(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for errors caused by bad input or configuration, as opposed to
    /// failures of the analysis itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Input(_)
                | Error::Rows { .. }
                | Error::UnrecoverableGap { .. }
                | Error::PartialYear(_)
                | Error::EmptyPeriod(_)
                | Error::MissingGdp { .. }
                | Error::MissingSi(_)
                | Error::Io { .. }
                | Error::Csv(_)
                | Error::Json(_)
        )
    }
}
