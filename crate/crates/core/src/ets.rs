//! Exponential-smoothing state-space models without trend: ETS(A,N,N),
//! ETS(A,N,A), ETS(M,N,N) and ETS(M,N,A).
//!
//! With additive seasonality the one-step forecast is `μ_t = l_{t-1} + s_{t-m}`.
//! Additive error updates the states by `α e_t` and `γ e_t` with
//! `e_t = y_t - μ_t`; multiplicative error uses the relative error
//! `ε_t = (y_t - μ_t) / μ_t` and updates by `α μ_t ε_t` and `γ μ_t ε_t`.
//! Parameters and initial states are estimated jointly by maximizing the
//! Gaussian likelihood with the variance concentrated out.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{nelder_mead, OptimizerOptions};
use crate::series::{mean, normalize_levels, Forecast, PredictionInterval, TimeSeries};

/// Sample paths used for simulated prediction intervals.
pub const SIMULATION_PATHS: usize = 5_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorType {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeasonalType {
    None,
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtsSpec {
    pub error: ErrorType,
    pub seasonal: SeasonalType,
    pub period: usize,
}

impl EtsSpec {
    pub fn new(error: ErrorType, seasonal: SeasonalType, period: usize) -> Result<Self> {
        if seasonal == SeasonalType::Additive && period < 2 {
            return Err(Error::InvalidArgument("additive seasonality needs period >= 2".into()));
        }
        Ok(Self { error, seasonal, period })
    }

    /// Every supported form, additive error and non-seasonal first.
    pub fn family(period: usize) -> Vec<EtsSpec> {
        let mut out = Vec::new();
        for error in [ErrorType::Additive, ErrorType::Multiplicative] {
            for seasonal in [SeasonalType::None, SeasonalType::Additive] {
                if let Ok(spec) = EtsSpec::new(error, seasonal, period) {
                    out.push(spec);
                }
            }
        }
        out
    }

    pub fn is_seasonal(&self) -> bool {
        self.seasonal == SeasonalType::Additive
    }

    fn season_len(&self) -> usize {
        if self.is_seasonal() {
            self.period
        } else {
            0
        }
    }

    /// Estimated smoothing parameters and free initial states (excludes σ).
    pub fn model_df(&self) -> usize {
        if self.is_seasonal() {
            2 + 1 + (self.period - 1)
        } else {
            1 + 1
        }
    }

    /// Parameter count for information criteria, including σ.
    pub fn param_count(&self) -> usize {
        self.model_df() + 1
    }

    pub fn min_length(&self) -> usize {
        if self.is_seasonal() {
            2 * self.period + 3
        } else {
            self.param_count() + 2
        }
    }
}

impl fmt::Display for EtsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.error {
            ErrorType::Additive => 'A',
            ErrorType::Multiplicative => 'M',
        };
        let s = match self.seasonal {
            SeasonalType::None => 'N',
            SeasonalType::Additive => 'A',
        };
        write!(f, "ETS({e},N,{s})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    pub alpha: f64,
    /// Zero for non-seasonal models.
    pub gamma: f64,
}

/// Level and seasonal states at one time point. `seasonal[j]` is the state
/// `j` months back (`s_0, s_{-1}, …, s_{-(m-1)}`); empty when non-seasonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtsStates {
    pub level: f64,
    pub seasonal: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    /// One-step forecasts `μ_t`.
    pub fitted: Vec<f64>,
    /// `e_t` (additive) or `ε_t` (multiplicative).
    pub innovations: Vec<f64>,
    pub final_states: EtsStates,
    pub loglik: f64,
}

fn check_params(spec: &EtsSpec, params: &SmoothingParams, init: &EtsStates) -> Result<()> {
    let SmoothingParams { alpha, gamma } = *params;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    if spec.is_seasonal() {
        if !(gamma >= 0.0 && gamma <= 1.0 - alpha + 1e-12) {
            return Err(Error::InvalidArgument(format!("gamma {gamma} outside [0, 1 - alpha]")));
        }
        if init.seasonal.len() != spec.period {
            return Err(Error::InvalidArgument(format!(
                "expected {} seasonal states, got {}",
                spec.period,
                init.seasonal.len()
            )));
        }
    } else if !init.seasonal.is_empty() {
        return Err(Error::InvalidArgument("non-seasonal model given seasonal states".into()));
    }
    Ok(())
}

/// Runs the state-space recursion over `y` and returns fitted values,
/// innovations, final states and the concentrated Gaussian log-likelihood.
pub fn ets_filter(
    spec: &EtsSpec,
    params: &SmoothingParams,
    init: &EtsStates,
    y: &[f64],
) -> Result<FilterOutput> {
    check_params(spec, params, init)?;
    let m = spec.season_len();
    let n = y.len();
    // ring[t % m] holds s_{t-m} when observation t (0-based) is processed
    let mut ring: Vec<f64> = init.seasonal.iter().rev().copied().collect();
    let mut level = init.level;
    let mut fitted = Vec::with_capacity(n);
    let mut innovations = Vec::with_capacity(n);
    let mut log_abs_mu = 0.0;
    let SmoothingParams { alpha, gamma } = *params;

    for (t, &obs) in y.iter().enumerate() {
        let s_old = if m > 0 { ring[t % m] } else { 0.0 };
        let mu = level + s_old;
        let shock = match spec.error {
            ErrorType::Additive => {
                let e = obs - mu;
                innovations.push(e);
                e
            }
            ErrorType::Multiplicative => {
                if mu == 0.0 {
                    return Err(Error::SingularForecast { index: t });
                }
                let eps = (obs - mu) / mu;
                innovations.push(eps);
                log_abs_mu += mu.abs().ln();
                mu * eps
            }
        };
        fitted.push(mu);
        level += alpha * shock;
        if m > 0 {
            ring[t % m] = s_old + gamma * shock;
        }
    }

    let final_states = EtsStates {
        level,
        seasonal: (0..m).map(|j| ring[(n + m - 1 - j) % m]).collect(),
    };
    let loglik = concentrated_loglik(&innovations, log_abs_mu);
    Ok(FilterOutput { fitted, innovations, final_states, loglik })
}

fn concentrated_loglik(innovations: &[f64], log_abs_mu: f64) -> f64 {
    let n = innovations.len() as f64;
    let sse: f64 = innovations.iter().map(|e| e * e).sum();
    -0.5 * n * (1.0 + (2.0 * std::f64::consts::PI).ln() + (sse / n).ln()) - log_abs_mu
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtsFit {
    pub spec: EtsSpec,
    pub params: SmoothingParams,
    pub initial_states: EtsStates,
    pub final_states: EtsStates,
    /// `sqrt(Σ innovation² / (n - model_df))`.
    pub sigma: f64,
    pub loglik: f64,
    pub aic: f64,
    pub aicc: f64,
    pub bic: f64,
    pub fitted: Vec<f64>,
    pub innovations: Vec<f64>,
    pub training: TimeSeries,
    pub converged: bool,
    pub iterations: usize,
}

impl EtsFit {
    /// Response residuals `y_t - μ_t`.
    pub fn residuals(&self) -> Vec<f64> {
        self.training.values().iter().zip(&self.fitted).map(|(y, f)| y - f).collect()
    }

    pub fn model_df(&self) -> usize {
        self.spec.model_df()
    }
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Maps the unconstrained optimizer vector onto admissible parameters and
/// zero-sum initial states.
struct Parameterization {
    spec: EtsSpec,
    level0: f64,
    /// Heuristic seasonal pattern in lag order.
    seasonal0: Vec<f64>,
    scale: f64,
}

impl Parameterization {
    fn start(&self) -> Vec<f64> {
        let mut u = vec![logit(0.3)];
        if self.spec.is_seasonal() {
            u.push(logit(0.1 / 0.7));
        }
        u.push(0.0);
        u.extend(std::iter::repeat_n(0.0, self.spec.season_len().saturating_sub(1)));
        u
    }

    fn decode(&self, u: &[f64]) -> (SmoothingParams, EtsStates) {
        let alpha = logistic(u[0]);
        if !self.spec.is_seasonal() {
            let level = self.level0 + self.scale * u[1];
            return (SmoothingParams { alpha, gamma: 0.0 }, EtsStates { level, seasonal: vec![] });
        }
        let gamma = (1.0 - alpha) * logistic(u[1]);
        let level = self.level0 + self.scale * u[2];
        let m = self.spec.period;
        let mut seasonal: Vec<f64> =
            (0..m - 1).map(|j| self.seasonal0[j] + self.scale * u[3 + j]).collect();
        seasonal.push(-seasonal.iter().sum::<f64>());
        (SmoothingParams { alpha, gamma }, EtsStates { level, seasonal })
    }
}

/// Starting states: level from the first two cycles, seasonal pattern from
/// per-month means of the first two or three cycles, recentred to sum to zero.
fn heuristic_states(spec: &EtsSpec, y: &[f64]) -> (f64, Vec<f64>) {
    let m = spec.period.max(1);
    let level = mean(&y[..y.len().min(2 * m)]);
    if !spec.is_seasonal() {
        return (level, vec![]);
    }
    let cycles = (y.len() / m).clamp(2, 3);
    let head = &y[..cycles * m];
    let overall = mean(head);
    // chronological position j covers observations j, j+m, ...
    let mut chrono: Vec<f64> = (0..m)
        .map(|j| mean(&head.iter().skip(j).step_by(m).copied().collect::<Vec<_>>()) - overall)
        .collect();
    let centre = mean(&chrono);
    chrono.iter_mut().for_each(|s| *s -= centre);
    // first observation uses s_{-(m-1)}, the last entry in lag order
    (level, chrono.into_iter().rev().collect())
}

fn ets_options() -> OptimizerOptions {
    OptimizerOptions {
        max_iterations: 20_000,
        ftol: 1e-10,
        initial_step: 0.2,
        restarts: 1,
        restart_shrink: 0.5,
    }
}

/// Maximum-likelihood fit of one ETS form.
pub fn fit_ets(ts: &TimeSeries, spec: &EtsSpec) -> Result<EtsFit> {
    let y = ts.values();
    let n = y.len();
    if n < spec.min_length() {
        return Err(Error::InsufficientData { needed: spec.min_length(), got: n });
    }
    let (level0, seasonal0) = heuristic_states(spec, y);
    let sd = {
        let mu = mean(y);
        (y.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n as f64).sqrt()
    };
    let scale = if sd > 0.0 { sd } else { level0.abs().max(1.0) };
    let param = Parameterization { spec: *spec, level0, seasonal0, scale };

    let objective = |u: &[f64]| {
        let (p, s) = param.decode(u);
        match ets_filter(spec, &p, &s, y) {
            Ok(out) if out.loglik.is_finite() => -out.loglik,
            _ => f64::INFINITY,
        }
    };
    let start = param.start();
    let start_value = objective(&start);
    if !start_value.is_finite() {
        return Err(Error::FitFailed(format!(
            "{spec}: likelihood not finite at heuristic start (level {level0:.4})"
        )));
    }
    let res = nelder_mead(objective, &start, &ets_options())?;
    if !res.minimum.is_finite() || res.minimum > start_value {
        return Err(Error::FitFailed(format!(
            "{spec}: optimizer did not improve on the heuristic start ({start_value} -> {})",
            res.minimum
        )));
    }
    let (params, initial_states) = param.decode(&res.argmin);
    let out = ets_filter(spec, &params, &initial_states, y)?;

    let k = spec.param_count() as f64;
    let nf = n as f64;
    let aic = -2.0 * out.loglik + 2.0 * k;
    let aicc = aic + 2.0 * k * (k + 1.0) / (nf - k - 1.0);
    let bic = -2.0 * out.loglik + k * nf.ln();
    let sse: f64 = out.innovations.iter().map(|e| e * e).sum();
    let sigma = (sse / (n - spec.model_df()) as f64).sqrt();

    Ok(EtsFit {
        spec: *spec,
        params,
        initial_states,
        final_states: out.final_states,
        sigma,
        loglik: out.loglik,
        aic,
        aicc,
        bic,
        fitted: out.fitted,
        innovations: out.innovations,
        training: ts.clone(),
        converged: res.converged,
        iterations: res.iterations,
    })
}

/// Relative AICc gap below which two candidates count as tied.
const AICC_TIE: f64 = 1e-8;

/// Fits every supported form and keeps the lowest AICc. Multiplicative error
/// is only tried on strictly positive data.
pub fn auto_ets(ts: &TimeSeries) -> Result<EtsFit> {
    let positive = ts.values().iter().all(|v| *v > 0.0);
    let candidates: Vec<EtsSpec> = EtsSpec::family(ts.period())
        .into_iter()
        .filter(|s| positive || s.error == ErrorType::Additive)
        .filter(|s| ts.len() >= s.min_length())
        .collect();
    let fits: Vec<Result<EtsFit>> = candidates.par_iter().map(|s| fit_ets(ts, s)).collect();
    let mut errors = Vec::new();
    let mut best: Option<EtsFit> = None;
    // candidates are ordered additive-first, non-seasonal-first; a later fit must win by more than rounding noise
    for fit in fits {
        match fit {
            Ok(f) if f.aicc.is_finite() => {
                if best.as_ref().is_none_or(|b| f.aicc < b.aicc - AICC_TIE * b.aicc.abs().max(1.0)) {
                    best = Some(f);
                }
            }
            Ok(f) => errors.push(format!("{}: non-finite AICc", f.spec)),
            Err(e) => errors.push(e.to_string()),
        }
    }
    best.ok_or_else(|| Error::FitFailed(format!("no ETS candidate could be fitted: {}", errors.join("; "))))
}

/// Forecast variance multipliers `v_h / σ²` for additive error.
pub fn additive_variance_factors(params: &SmoothingParams, period: usize, horizon: usize) -> Vec<f64> {
    let SmoothingParams { alpha, gamma } = *params;
    (1..=horizon)
        .map(|h| {
            let k = ((h - 1) / period.max(1)) as f64;
            1.0 + alpha * alpha * (h - 1) as f64 + gamma * (2.0 * alpha + gamma) * k
        })
        .collect()
}

fn point_forecasts(fit: &EtsFit, horizon: usize) -> Vec<f64> {
    let st = &fit.final_states;
    let m = st.seasonal.len();
    (1..=horizon)
        .map(|h| {
            if m == 0 {
                st.level
            } else {
                // s_{T+h-m(k+1)} is the state (m - 1 - (h-1) mod m) months back
                st.level + st.seasonal[m - 1 - (h - 1) % m]
            }
        })
        .collect()
}

/// Simulated future paths of the fitted model, `paths × horizon`.
pub fn simulate_paths(fit: &EtsFit, horizon: usize, paths: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let SmoothingParams { alpha, gamma } = fit.params;
    let m = fit.final_states.seasonal.len();
    let mut out = Vec::with_capacity(paths);
    for _ in 0..paths {
        let mut level = fit.final_states.level;
        // ring[j] is the seasonal state used at step j (mod m)
        let mut ring: Vec<f64> = fit.final_states.seasonal.iter().rev().copied().collect();
        let mut path = Vec::with_capacity(horizon);
        for h in 0..horizon {
            let s_old = if m > 0 { ring[h % m] } else { 0.0 };
            let mu = level + s_old;
            let z: f64 = StandardNormal.sample(&mut rng);
            let shock = match fit.spec.error {
                ErrorType::Additive => fit.sigma * z,
                ErrorType::Multiplicative => mu * fit.sigma * z,
            };
            path.push(mu + shock);
            level += alpha * shock;
            if m > 0 {
                ring[h % m] = s_old + gamma * shock;
            }
        }
        out.push(path);
    }
    out
}

/// Linear-interpolation sample quantile of sorted data.
fn sorted_quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Flat level plus the repeating final seasonal cycle. Additive-error bands
/// are analytic; multiplicative-error bands come from simulated paths.
pub fn forecast_ets(fit: &EtsFit, horizon: usize, levels: &[f64], seed: u64) -> Result<Forecast> {
    forecast_ets_with_paths(fit, horizon, levels, seed, SIMULATION_PATHS)
}

pub fn forecast_ets_with_paths(
    fit: &EtsFit,
    horizon: usize,
    levels: &[f64],
    seed: u64,
    paths: usize,
) -> Result<Forecast> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let points = point_forecasts(fit, horizon);
    let origin = fit.training.end();
    let label = fit.spec.to_string();
    match fit.spec.error {
        ErrorType::Additive => {
            let sds: Vec<f64> = additive_variance_factors(&fit.params, fit.spec.period, horizon)
                .into_iter()
                .map(|f| fit.sigma * f.sqrt())
                .collect();
            Forecast::gaussian(origin, points, &sds, levels, label)
        }
        ErrorType::Multiplicative => {
            if paths < 2 {
                return Err(Error::InvalidArgument("simulation needs at least two paths".into()));
            }
            let levels = normalize_levels(levels)?;
            let sims = simulate_paths(fit, horizon, paths, seed);
            let columns: Vec<Vec<f64>> = (0..horizon)
                .map(|h| {
                    let mut col: Vec<f64> = sims.iter().map(|p| p[h]).collect();
                    col.sort_by(f64::total_cmp);
                    col
                })
                .collect();
            let intervals = levels
                .iter()
                .map(|&level| {
                    let (lo_p, hi_p) = (0.5 * (1.0 - level), 0.5 * (1.0 + level));
                    // bands always contain the point forecast
                    PredictionInterval {
                        level,
                        lower: columns
                            .iter()
                            .zip(&points)
                            .map(|(c, p)| sorted_quantile(c, lo_p).min(*p))
                            .collect(),
                        upper: columns
                            .iter()
                            .zip(&points)
                            .map(|(c, p)| sorted_quantile(c, hi_p).max(*p))
                            .collect(),
                    }
                })
                .collect();
            Ok(Forecast { origin, points, intervals, method: label })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::MonthStamp;

    fn spec(error: ErrorType, seasonal: SeasonalType) -> EtsSpec {
        EtsSpec::new(error, seasonal, 12).unwrap()
    }

    /// Materializes every state in a table indexed by time, with the seasonal
    /// column addressed as `s[t - m]`, and evaluates the likelihood from it.
    fn table_loglik(spec: &EtsSpec, alpha: f64, gamma: f64, l0: f64, s_lag: &[f64], y: &[f64]) -> f64 {
        let m = s_lag.len();
        let n = y.len();
        // s_table[i] is s_{i - m}; i = 0..m are the initial states s_{-m+1}..s_0 shifted by one
        let mut s_table = vec![0.0; n + m];
        for j in 0..m {
            s_table[m - 1 - j] = s_lag[j];
        }
        let mut l_table = vec![0.0; n + 1];
        l_table[0] = l0;
        let mut sse = 0.0;
        let mut logmu = 0.0;
        for t in 1..=n {
            let s_prev = if m > 0 { s_table[t - 1] } else { 0.0 };
            let mu = l_table[t - 1] + s_prev;
            let (err, shock) = match spec.error {
                ErrorType::Additive => (y[t - 1] - mu, y[t - 1] - mu),
                ErrorType::Multiplicative => {
                    logmu += mu.abs().ln();
                    let eps = (y[t - 1] - mu) / mu;
                    (eps, mu * eps)
                }
            };
            sse += err * err;
            l_table[t] = l_table[t - 1] + alpha * shock;
            if m > 0 {
                s_table[t - 1 + m] = s_prev + gamma * shock;
            }
        }
        let nf = n as f64;
        -0.5 * nf * (1.0 + (2.0 * std::f64::consts::PI).ln() + (sse / nf).ln()) - logmu
    }

    fn synthetic(n: usize) -> Vec<f64> {
        (0..n)
            .map(|t| 100.0 + 10.0 * ((t as f64) * 0.52).sin() + ((t * 37) % 11) as f64)
            .collect()
    }

    #[test]
    fn filter_matches_state_table() {
        let y = synthetic(30);
        let s: Vec<f64> = (0..12).map(|j| (j as f64 - 5.5) * 0.7).collect();
        for sp in EtsSpec::family(12) {
            let (seas, gamma) = if sp.is_seasonal() { (s.clone(), 0.13) } else { (vec![], 0.0) };
            let p = SmoothingParams { alpha: 0.41, gamma };
            let out = ets_filter(&sp, &p, &EtsStates { level: 98.0, seasonal: seas.clone() }, &y).unwrap();
            let oracle = table_loglik(&sp, 0.41, gamma, 98.0, &seas, &y);
            assert!((out.loglik - oracle).abs() < 1e-10, "{sp}: {} vs {oracle}", out.loglik);
        }
    }

    #[test]
    fn alpha_one_is_naive() {
        let y = synthetic(20);
        let sp = spec(ErrorType::Additive, SeasonalType::None);
        let p = SmoothingParams { alpha: 1.0, gamma: 0.0 };
        let out = ets_filter(&sp, &p, &EtsStates { level: 7.0, seasonal: vec![] }, &y).unwrap();
        assert_eq!(out.fitted[0], 7.0);
        for t in 1..20 {
            assert_eq!(out.fitted[t], y[t - 1]);
        }
    }

    #[test]
    fn frozen_states() {
        let y = synthetic(48);
        let sp = spec(ErrorType::Additive, SeasonalType::Additive);
        let s: Vec<f64> = (0..12).map(|j| j as f64).collect();
        let p = SmoothingParams { alpha: 0.0, gamma: 0.0 };
        let out = ets_filter(&sp, &p, &EtsStates { level: 50.0, seasonal: s.clone() }, &y).unwrap();
        for t in 0..48 {
            // observation t uses s_{-(m-1)+ (t mod m)}
            assert_eq!(out.fitted[t], 50.0 + s[11 - t % 12]);
        }
        assert_eq!(out.final_states.seasonal, s);
    }

    #[test]
    fn multiplicative_zero_forecast() {
        let sp = spec(ErrorType::Multiplicative, SeasonalType::None);
        let p = SmoothingParams { alpha: 0.5, gamma: 0.0 };
        let r = ets_filter(&sp, &p, &EtsStates { level: 0.0, seasonal: vec![] }, &[1.0, 2.0]);
        assert!(matches!(r, Err(Error::SingularForecast { index: 0 })));
    }

    #[test]
    fn rejects_inadmissible_params() {
        let sp = spec(ErrorType::Additive, SeasonalType::Additive);
        let init = EtsStates { level: 0.0, seasonal: vec![0.0; 12] };
        let y = [1.0; 5];
        assert!(ets_filter(&sp, &SmoothingParams { alpha: 0.7, gamma: 0.5 }, &init, &y).is_err());
        assert!(ets_filter(&sp, &SmoothingParams { alpha: 1.2, gamma: 0.0 }, &init, &y).is_err());
        let short = EtsStates { level: 0.0, seasonal: vec![0.0; 11] };
        assert!(ets_filter(&sp, &SmoothingParams { alpha: 0.3, gamma: 0.1 }, &short, &y).is_err());
    }

    #[test]
    fn spec_counts_and_labels() {
        let ana = spec(ErrorType::Additive, SeasonalType::Additive);
        assert_eq!(ana.param_count(), 15);
        assert_eq!(ana.model_df(), 14);
        assert_eq!(ana.to_string(), "ETS(A,N,A)");
        assert_eq!(spec(ErrorType::Multiplicative, SeasonalType::None).to_string(), "ETS(M,N,N)");
        assert_eq!(EtsSpec::family(12).len(), 4);
        assert!(EtsSpec::new(ErrorType::Additive, SeasonalType::Additive, 1).is_err());
    }

    #[test]
    fn variance_factors() {
        let p = SmoothingParams { alpha: 0.5, gamma: 0.1 };
        let f = additive_variance_factors(&p, 12, 30);
        assert_eq!(f[0], 1.0);
        assert!(f.windows(2).all(|w| w[1] >= w[0]));
        // h = 13: 1 + 0.25*12 + 0.1*1.1*1
        assert!((f[12] - (1.0 + 3.0 + 0.11)).abs() < 1e-12);
        let flat = additive_variance_factors(&SmoothingParams { alpha: 0.0, gamma: 0.0 }, 12, 30);
        assert!(flat.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn heuristic_states_sum_to_zero() {
        let y = synthetic(60);
        let (_, s) = heuristic_states(&spec(ErrorType::Additive, SeasonalType::Additive), &y);
        assert_eq!(s.len(), 12);
        assert!(s.iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn decoded_states_sum_to_zero() {
        let y = synthetic(60);
        let sp = spec(ErrorType::Additive, SeasonalType::Additive);
        let (level0, seasonal0) = heuristic_states(&sp, &y);
        let param = Parameterization { spec: sp, level0, seasonal0, scale: 3.0 };
        let u: Vec<f64> = (0..14).map(|i| (i as f64 * 0.37).sin()).collect();
        let (p, s) = param.decode(&u);
        assert!(p.alpha > 0.0 && p.alpha < 1.0);
        assert!(p.gamma > 0.0 && p.gamma < 1.0 - p.alpha);
        assert!(s.seasonal.iter().sum::<f64>().abs() < 1e-9);
    }

    #[test]
    fn forecast_h1_half_width_is_z_sigma() {
        let ts = TimeSeries::monthly(MonthStamp::new(2000, 1).unwrap(), synthetic(72)).unwrap();
        let fit = fit_ets(&ts, &spec(ErrorType::Additive, SeasonalType::Additive)).unwrap();
        let fc = forecast_ets(&fit, 24, &[0.95], 1).unwrap();
        let z = crate::numerics::normal_quantile(0.975).unwrap();
        let pi = fc.interval(0.95).unwrap();
        assert!((pi.upper[0] - fc.points[0] - z * fit.sigma).abs() < 1e-9);
        assert!(fc.is_consistent());
    }
}
