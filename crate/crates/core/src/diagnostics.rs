//! Training-set accuracy measures, the Ljung-Box portmanteau test and
//! residual-diagnostic data bundles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::chi_squared_sf;
use crate::series::{acf, MonthStamp, TimeSeries};

/// Default Ljung-Box lag count for monthly data.
pub const DEFAULT_LJUNG_BOX_LAGS: usize = 24;

/// The seven training-set error statistics. MPE and MAPE are in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyMeasures {
    pub me: f64,
    pub rmse: f64,
    pub mae: f64,
    pub mpe: f64,
    pub mape: f64,
    /// `None` when the seasonal-naive scale is zero or undefined.
    pub mase: Option<f64>,
    /// `None` when the residuals have zero variance.
    pub acf1: Option<f64>,
    /// Observations left out of MPE/MAPE because the actual value was zero.
    pub skipped_zero_actuals: usize,
}

/// In-sample seasonal-naive MAE, the MASE denominator.
pub fn seasonal_naive_scale(training: &TimeSeries) -> Option<f64> {
    let m = training.period();
    let y = training.values();
    if y.len() <= m {
        return None;
    }
    let d: Vec<f64> = y[m..].iter().zip(y).map(|(a, b)| (a - b).abs()).collect();
    Some(d.iter().sum::<f64>() / d.len() as f64)
}

/// Accuracy of `residuals` against the aligned `actual` values; `training`
/// supplies the MASE scale.
pub fn accuracy(residuals: &[f64], actual: &[f64], training: &TimeSeries) -> Result<AccuracyMeasures> {
    if residuals.len() != actual.len() {
        return Err(Error::InvalidArgument(format!(
            "residuals ({}) and actuals ({}) are not aligned",
            residuals.len(),
            actual.len()
        )));
    }
    if residuals.is_empty() {
        return Err(Error::InvalidArgument("no residuals".into()));
    }
    let n = residuals.len() as f64;
    let me = residuals.iter().sum::<f64>() / n;
    let rmse = (residuals.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    let mae = residuals.iter().map(|e| e.abs()).sum::<f64>() / n;

    let ratios: Vec<f64> =
        residuals.iter().zip(actual).filter(|(_, y)| **y != 0.0).map(|(e, y)| e / y).collect();
    if ratios.is_empty() {
        return Err(Error::UndefinedMape);
    }
    let skipped_zero_actuals = residuals.len() - ratios.len();
    let k = ratios.len() as f64;
    let mpe = 100.0 * ratios.iter().sum::<f64>() / k;
    let mape = 100.0 * ratios.iter().map(|r| r.abs()).sum::<f64>() / k;

    let mase = seasonal_naive_scale(training).and_then(|scale| {
        if scale > 0.0 {
            Some(mae / scale)
        } else if mae == 0.0 {
            Some(0.0)
        } else {
            None
        }
    });
    let acf1 = if residuals.len() >= 2 { acf(residuals, 1).ok().map(|r| r[0]) } else { None };
    Ok(AccuracyMeasures { me, rmse, mae, mpe, mape, mase, acf1, skipped_zero_actuals })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxResult {
    pub q_star: f64,
    pub df: usize,
    pub p_value: f64,
    pub lags_used: usize,
    pub model_df: usize,
}

/// `Q* = n(n+2) Σ_{k=1}^{lags} r_k² / (n-k)`, referred to χ²(lags - model_df).
pub fn ljung_box(residuals: &[f64], lags_used: usize, model_df: usize) -> Result<LjungBoxResult> {
    let n = residuals.len();
    if lags_used <= model_df {
        return Err(Error::InvalidArgument(format!(
            "Ljung-Box needs more lags ({lags_used}) than model degrees of freedom ({model_df})"
        )));
    }
    if n <= lags_used {
        return Err(Error::InvalidArgument(format!(
            "Ljung-Box needs more residuals ({n}) than lags ({lags_used})"
        )));
    }
    let r = acf(residuals, lags_used)?;
    let nf = n as f64;
    let q_star = nf
        * (nf + 2.0)
        * r.iter().enumerate().map(|(i, rk)| rk * rk / (nf - (i + 1) as f64)).sum::<f64>();
    let df = lags_used - model_df;
    let p_value = chi_squared_sf(q_star, df as u32)?;
    Ok(LjungBoxResult { q_star, df, p_value, lags_used, model_df })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges, ascending.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Plot data for a residual check: time plot, ACF with its ±2/√n band, histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualBundle {
    pub stamps: Vec<MonthStamp>,
    pub residuals: Vec<f64>,
    pub acf: Vec<f64>,
    pub acf_band: f64,
    pub histogram: Histogram,
}

pub fn residual_bundle(residuals: &[f64], first: MonthStamp) -> Result<ResidualBundle> {
    let n = residuals.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no residuals".into()));
    }
    let lags = (n / 4).clamp(1, 24);
    let r = acf(residuals, lags)?;
    Ok(ResidualBundle {
        stamps: (0..n).map(|i| first.add_months(i as i64)).collect(),
        residuals: residuals.to_vec(),
        acf: r,
        acf_band: 2.0 / (n as f64).sqrt(),
        histogram: sturges_histogram(residuals),
    })
}

/// Equal-width histogram with `ceil(log2 n) + 1` bins.
pub fn sturges_histogram(values: &[f64]) -> Histogram {
    let n = values.len();
    let bins = ((n as f64).log2().ceil() as usize + 1).max(1);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0; bins];
    for v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Histogram { edges, counts }
}
