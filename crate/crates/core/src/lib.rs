//! Monthly production forecasting: seasonal naive, exponential smoothing
//! (ETS) and seasonal ARIMA models with prediction intervals, residual
//! diagnostics and EIA Monthly Energy Review ingestion.

pub mod diagnostics;
pub mod error;
pub mod ets;
pub mod ingest;
pub mod numerics;
pub mod report;
pub mod sarima;
pub mod series;
pub mod snaive;

pub use error::{Error, ErrorClass, Result};
pub use series::{Forecast, MonthStamp, PredictionInterval, TimeSeries};
