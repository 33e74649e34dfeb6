//! Seasonal ARIMA models.

mod fit;
mod forecast;
mod kalman;
mod order;
mod poly;
mod select;

pub use fit::{difference_for, evaluate_sarima, fit_sarima, SarimaEvaluation, SarimaFit};
pub use forecast::{forecast_sarima, forecast_variances, integrated_psi};
pub use kalman::{autocovariances, kalman_loglik, KalmanOutput, NONCAUSAL_PENALTY};
pub use order::{SarimaCoefficients, SarimaOrder};
pub use poly::{
    ar_to_pacf, differencing_operator, expand_polynomials, integrated_ar, is_causal, is_invertible,
    pacf_to_ar, psi_weights,
};
pub use select::{
    auto_sarima, auto_sarima_traced, kpss_level, ndiffs, nsdiffs, seasonal_strength, AutoSarima, SearchStep,
    KPSS_CRITICAL_5PCT, SEASONAL_STRENGTH_THRESHOLD,
};
