//! Seasonal naive model: each month is forecast by the same month one
//! seasonal cycle earlier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Forecast, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SNaiveFit {
    pub training: TimeSeries,
    /// `ŷ_t = y_{t-m}` for `t = m..n` (0-based), aligned with `residuals`.
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Sample standard deviation of the residuals (denominator `n - m - 1`).
    pub residual_sd: f64,
}

impl SNaiveFit {
    pub fn period(&self) -> usize {
        self.training.period()
    }

    /// Index in the training series of the first residual.
    pub fn first_residual_index(&self) -> usize {
        self.period()
    }

    /// Number of estimated coefficients, as used for Ljung-Box degrees of freedom.
    pub fn model_df(&self) -> usize {
        0
    }
}

pub fn fit_snaive(ts: &TimeSeries) -> Result<SNaiveFit> {
    let m = ts.period();
    let n = ts.len();
    if n < 2 * m {
        return Err(Error::InsufficientData { needed: 2 * m, got: n });
    }
    let y = ts.values();
    let fitted = y[..n - m].to_vec();
    let residuals: Vec<f64> = y[m..].iter().zip(&fitted).map(|(a, f)| a - f).collect();
    let count = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / count;
    let ss: f64 = residuals.iter().map(|e| (e - mean).powi(2)).sum();
    let residual_sd = if residuals.len() > 1 { (ss / (count - 1.0)).sqrt() } else { 0.0 };
    Ok(SNaiveFit { training: ts.clone(), fitted, residuals, residual_sd })
}

/// Repeats the last observed cycle. The interval half-width at level `L` is
/// `z_{(1+L)/2} · σ̂ · sqrt(k + 1)` with `k` the number of completed cycles.
pub fn forecast_snaive(fit: &SNaiveFit, horizon: usize, levels: &[f64]) -> Result<Forecast> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let m = fit.period();
    let y = fit.training.values();
    let n = y.len();
    let mut points = Vec::with_capacity(horizon);
    let mut sds = Vec::with_capacity(horizon);
    for h in 1..=horizon {
        let k = (h - 1) / m;
        points.push(y[n + h - m * (k + 1) - 1]);
        sds.push(fit.residual_sd * ((k + 1) as f64).sqrt());
    }
    Forecast::gaussian(fit.training.end(), points, &sds, levels, "Seasonal naive method")
}
