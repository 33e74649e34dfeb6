use serde::{Deserialize, Serialize};

use crate::diagnostics::{accuracy, ljung_box, AccuracyMeasures, LjungBoxResult};
use crate::error::{Error, Result};
use crate::ets::{auto_ets, forecast_ets, EtsFit};
use crate::sarima::{auto_sarima, fit_sarima, forecast_sarima, SarimaFit, SarimaOrder};
use crate::series::{Forecast, MonthStamp, TimeSeries};
use crate::snaive::{fit_snaive, forecast_snaive, SNaiveFit};

/// One fitted model of any supported family.
#[derive(Debug, Clone)]
pub enum FittedModel {
    Snaive(SNaiveFit),
    Ets(Box<EtsFit>),
    Arima(Box<SarimaFit>),
}

/// Which ARIMA order to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArimaOrderChoice {
    Auto,
    Fixed(SarimaOrder),
}

impl FittedModel {
    /// Short file-name friendly family name.
    pub fn family(&self) -> &'static str {
        match self {
            FittedModel::Snaive(_) => "snaive",
            FittedModel::Ets(_) => "ets",
            FittedModel::Arima(_) => "arima",
        }
    }

    pub fn method(&self) -> String {
        match self {
            FittedModel::Snaive(_) => "Seasonal naive method".into(),
            FittedModel::Ets(f) => f.spec.to_string(),
            FittedModel::Arima(f) => f.label(),
        }
    }

    pub fn training(&self) -> &TimeSeries {
        match self {
            FittedModel::Snaive(f) => &f.training,
            FittedModel::Ets(f) => &f.training,
            FittedModel::Arima(f) => &f.training,
        }
    }

    /// Response residuals `y_t - ŷ_t` with their training-set actuals.
    pub fn residuals(&self) -> (Vec<f64>, &[f64]) {
        match self {
            FittedModel::Snaive(f) => (f.residuals.clone(), &f.training.values()[f.first_residual_index()..]),
            FittedModel::Ets(f) => (f.residuals(), f.training.values()),
            FittedModel::Arima(f) => (f.residuals.clone(), f.actual()),
        }
    }

    /// Residuals tested for whiteness: innovations for ETS, response residuals otherwise.
    pub fn check_residuals(&self) -> Vec<f64> {
        match self {
            FittedModel::Ets(f) => f.innovations.clone(),
            _ => self.residuals().0,
        }
    }

    pub fn first_residual_stamp(&self) -> MonthStamp {
        let offset = match self {
            FittedModel::Snaive(f) => f.first_residual_index(),
            FittedModel::Ets(_) => 0,
            FittedModel::Arima(f) => f.first_residual_index(),
        };
        self.training().stamp_at(offset)
    }

    pub fn model_df(&self) -> usize {
        match self {
            FittedModel::Snaive(f) => f.model_df(),
            FittedModel::Ets(f) => f.model_df(),
            FittedModel::Arima(f) => f.model_df(),
        }
    }

    pub fn forecast(&self, horizon: usize, levels: &[f64], seed: u64) -> Result<Forecast> {
        match self {
            FittedModel::Snaive(f) => forecast_snaive(f, horizon, levels),
            FittedModel::Ets(f) => forecast_ets(f, horizon, levels, seed),
            FittedModel::Arima(f) => forecast_sarima(f, horizon, levels),
        }
    }

    /// Accuracy measures plus a Ljung-Box test.
    pub fn diagnose(&self) -> Result<ModelDiagnostics> {
        let (residuals, actual) = self.residuals();
        let accuracy = accuracy(&residuals, actual, self.training())?;
        let check = self.check_residuals();
        let lags = ljung_box_lags(self.training().period(), check.len(), self.model_df());
        let ljung_box = ljung_box(&check, lags, self.model_df()).ok();
        Ok(ModelDiagnostics { accuracy, ljung_box })
    }
}

/// `min(2m, n/5)` lags (10 for non-seasonal data), but at least `model_df + 3`.
pub fn ljung_box_lags(period: usize, n: usize, model_df: usize) -> usize {
    let base = if period > 1 { 2 * period } else { 10 };
    let capped = base.min((n as f64 / 5.0).round() as usize);
    capped.max(model_df + 3)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDiagnostics {
    pub accuracy: AccuracyMeasures,
    /// `None` when the residual series is too short or has zero variance.
    pub ljung_box: Option<LjungBoxResult>,
}

pub fn fit_snaive_model(ts: &TimeSeries) -> Result<FittedModel> {
    fit_snaive(ts).map(FittedModel::Snaive)
}

pub fn fit_ets_model(ts: &TimeSeries) -> Result<FittedModel> {
    auto_ets(ts).map(|f| FittedModel::Ets(Box::new(f)))
}

pub fn fit_arima_model(ts: &TimeSeries, order: ArimaOrderChoice) -> Result<FittedModel> {
    let fit = match order {
        ArimaOrderChoice::Auto => auto_sarima(ts)?,
        ArimaOrderChoice::Fixed(o) => {
            if o.period > 1 && o.period != ts.period() {
                return Err(Error::InvalidArgument(format!(
                    "order period {} differs from series period {}",
                    o.period,
                    ts.period()
                )));
            }
            fit_sarima(ts, &o)?
        }
    };
    Ok(FittedModel::Arima(Box::new(fit)))
}
