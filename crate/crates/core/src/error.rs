use thiserror::Error;

use crate::series::MonthStamp;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Fit,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("objective is not finite at the starting point")]
    InvalidStart,

    #[error("numerical differentiation failed: {0}")]
    Differentiation(String),

    #[error("one-step forecast is zero at index {index}; multiplicative error undefined")]
    SingularForecast { index: usize },

    #[error("model fit failed: {0}")]
    FitFailed(String),

    #[error("series {msn:?} not found; available codes: {}", available.join(", "))]
    NotFound { msn: String, available: Vec<String> },

    #[error("series is not contiguous: {after} is followed by {next}")]
    Discontinuity { after: MonthStamp, next: MonthStamp },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("MAPE undefined: every actual value is zero")]
    UndefinedMape,

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArgument(_) | Error::Range(_) | Error::Domain(_) => ErrorClass::Usage,
            Error::FitFailed(_)
            | Error::InvalidStart
            | Error::Differentiation(_)
            | Error::SingularForecast { .. } => ErrorClass::Fit,
            _ => ErrorClass::Data,
        }
    }

    /// Short stable identifier for machine-readable error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Range(_) => "range",
            Error::DegenerateSeries(_) => "degenerate_series",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::Domain(_) => "domain",
            Error::InvalidStart => "invalid_start",
            Error::Differentiation(_) => "differentiation",
            Error::SingularForecast { .. } => "singular_forecast",
            Error::FitFailed(_) => "fit_failed",
            Error::NotFound { .. } => "not_found",
            Error::Discontinuity { .. } => "discontinuity",
            Error::Parse { .. } => "parse",
            Error::UndefinedMape => "undefined_mape",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
