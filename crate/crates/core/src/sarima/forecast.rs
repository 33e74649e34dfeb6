use crate::error::{Error, Result};
use crate::series::Forecast;

use super::fit::{evaluate_sarima, SarimaFit};
use super::poly::{differencing_operator, integrated_ar, psi_weights};

/// `ψ_0..ψ_{h-1}` of the full operator `φ(B)Φ(Bᵐ)(1-B)^d(1-Bᵐ)^D`.
pub fn integrated_psi(fit: &SarimaFit, horizon: usize) -> Vec<f64> {
    psi_weights(&integrated_ar(&fit.order, &fit.phi), &fit.theta, horizon)
}

/// Forecast error variances `σ² Σ_{j<h} ψ_j²` for `h = 1..=horizon`.
pub fn forecast_variances(fit: &SarimaFit, horizon: usize) -> Vec<f64> {
    let psi = integrated_psi(fit, horizon);
    let mut acc = 0.0;
    psi.iter()
        .map(|p| {
            acc += p * p;
            fit.sigma2 * acc
        })
        .collect()
}

/// Conditional-mean forecasts of the differenced process, reintegrated to
/// the original scale, with Gaussian bands from the ψ-weight variances.
pub fn forecast_sarima(fit: &SarimaFit, horizon: usize, levels: &[f64]) -> Result<Forecast> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let eval = evaluate_sarima(&fit.training, &fit.order, &fit.coefficients)?;
    if eval.penalized {
        return Err(Error::FitFailed("fitted coefficients are outside the causal region".into()));
    }
    let r = eval.next_state.len();
    let mut phi_r = vec![0.0; r];
    phi_r[..fit.phi.len()].copy_from_slice(&fit.phi);
    let mean = fit.coefficients.mean.unwrap_or(0.0);

    let mut state = eval.next_state;
    let mut w_hat = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        w_hat.push(state[0] + mean);
        let head = state[0];
        state = (0..r).map(|i| phi_r[i] * head + state.get(i + 1).copied().unwrap_or(0.0)).collect();
    }

    // y_t = w_t - Σ_{i≥1} δ_i y_{t-i}
    let delta = differencing_operator(fit.order.d, fit.order.sd, fit.order.period);
    let mut y = fit.training.values().to_vec();
    let n = y.len();
    for (j, w) in w_hat.iter().enumerate() {
        let t = n + j;
        let mut v = *w;
        for (i, c) in delta.iter().enumerate().skip(1) {
            v -= c * y[t - i];
        }
        y.push(v);
    }
    let points = y.split_off(n);
    let sds: Vec<f64> = forecast_variances(fit, horizon).iter().map(|v| v.sqrt()).collect();
    Forecast::gaussian(fit.training.end(), points, &sds, levels, fit.label())
}
