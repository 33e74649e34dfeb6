use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::DateRange;
use crate::sarima::SarimaOrder;
use crate::series::{normalize_levels, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    #[default]
    None,
    /// First difference.
    Diff,
    /// Difference at the seasonal lag.
    SeasonalDiff,
}

impl Transform {
    pub fn apply(self, ts: &TimeSeries) -> Result<TimeSeries> {
        match self {
            Transform::None => Ok(ts.clone()),
            Transform::Diff => ts.difference(1),
            Transform::SeasonalDiff => ts.difference(ts.period()),
        }
    }

    /// Name of the transformed series, e.g. `diff(DFR)`.
    pub fn label(self, name: &str) -> String {
        match self {
            Transform::None => name.to_string(),
            Transform::Diff => format!("diff({name})"),
            Transform::SeasonalDiff => format!("diff({name}, lag = m)"),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::None => "none",
            Transform::Diff => "diff",
            Transform::SeasonalDiff => "seasonal-diff",
        })
    }
}

impl FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Transform::None),
            "diff" => Ok(Transform::Diff),
            "seasonal-diff" => Ok(Transform::SeasonalDiff),
            _ => Err(Error::InvalidArgument(format!("unknown transform {s:?} (none, diff, seasonal-diff)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    Snaive,
    Ets,
    Arima,
    AutoCompare,
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelChoice::Snaive => "snaive",
            ModelChoice::Ets => "ets",
            ModelChoice::Arima => "arima",
            ModelChoice::AutoCompare => "auto-compare",
        })
    }
}

impl FromStr for ModelChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snaive" => Ok(ModelChoice::Snaive),
            "ets" => Ok(ModelChoice::Ets),
            "arima" => Ok(ModelChoice::Arima),
            "auto-compare" => Ok(ModelChoice::AutoCompare),
            _ => Err(Error::InvalidArgument(format!(
                "unknown model {s:?} (snaive, ets, arima, auto-compare)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?} (csv, json)"))),
        }
    }
}

pub const DEFAULT_HORIZON: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub msn: String,
    #[serde(skip)]
    pub range: DateRange,
    pub transform: Transform,
    pub model: ModelChoice,
    /// Fixed ARIMA order; the order is searched when `None`.
    pub order: Option<SarimaOrder>,
    pub horizon: usize,
    pub levels: Vec<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// Write forecast tables and the Forecasts report section.
    pub include_forecast: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, msn: impl Into<String>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            msn: msn.into(),
            range: DateRange::default(),
            transform: Transform::None,
            model: ModelChoice::AutoCompare,
            order: None,
            horizon: DEFAULT_HORIZON,
            levels: vec![0.80, 0.95],
            seed: 0,
            out_dir: out_dir.into(),
            formats: vec![OutputFormat::Csv],
            include_forecast: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be >= 1".into()));
        }
        normalize_levels(&self.levels)?;
        if self.msn.trim().is_empty() {
            return Err(Error::InvalidArgument("msn must not be empty".into()));
        }
        if let Some(o) = &self.order {
            o.validate()?;
            if self.model != ModelChoice::Arima && self.model != ModelChoice::AutoCompare {
                return Err(Error::InvalidArgument(format!("--order applies to arima, not {}", self.model)));
            }
        }
        Ok(())
    }

    pub fn levels(&self) -> Vec<f64> {
        normalize_levels(&self.levels).unwrap_or_else(|_| vec![0.80, 0.95])
    }
}
