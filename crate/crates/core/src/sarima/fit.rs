use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{nelder_mead, numerical_hessian, standard_errors, OptimizerOptions};
use crate::series::{difference_values, mean, TimeSeries};

use super::kalman::{kalman_loglik, KalmanOutput};
use super::order::{SarimaCoefficients, SarimaOrder};
#[cfg(test)]
use super::poly::ar_to_pacf;
use super::poly::{expand_polynomials, pacf_to_ar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SarimaFit {
    pub order: SarimaOrder,
    pub coefficients: SarimaCoefficients,
    /// Aligned with [`SarimaCoefficients::to_vec`]; `None` if the Hessian
    /// could not be inverted.
    pub standard_errors: Option<Vec<f64>>,
    /// `Σ e_t² / (n_used - coefficient count)`.
    pub sigma2: f64,
    pub loglik: f64,
    pub aic: f64,
    pub aicc: f64,
    pub bic: f64,
    /// One-step residuals for observations `n - n_used ..`.
    pub residuals: Vec<f64>,
    /// Expanded `φ(B)Φ(Bᵐ)` coefficients.
    pub phi: Vec<f64>,
    /// Expanded `θ(B)Θ(Bᵐ)` coefficients.
    pub theta: Vec<f64>,
    pub training: TimeSeries,
    pub n_used: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl SarimaFit {
    pub fn first_residual_index(&self) -> usize {
        self.order.lost_to_differencing()
    }

    /// Observations aligned with `residuals`.
    pub fn actual(&self) -> &[f64] {
        &self.training.values()[self.first_residual_index()..]
    }

    pub fn fitted(&self) -> Vec<f64> {
        self.actual().iter().zip(&self.residuals).map(|(y, e)| y - e).collect()
    }

    /// Estimated coefficients including the mean, as used for Ljung-Box degrees of freedom.
    pub fn model_df(&self) -> usize {
        self.coefficients.to_vec().len()
    }

    pub fn with_mean(&self) -> bool {
        self.coefficients.mean.is_some()
    }

    pub fn label(&self) -> String {
        if self.with_mean() {
            format!("{} with non-zero mean", self.order)
        } else {
            self.order.to_string()
        }
    }
}

/// The series after `D` seasonal and `d` ordinary differences.
pub fn difference_for(ts: &TimeSeries, order: &SarimaOrder) -> Vec<f64> {
    let mut w = ts.values().to_vec();
    for _ in 0..order.sd {
        w = difference_values(&w, order.period);
    }
    for _ in 0..order.d {
        w = difference_values(&w, 1);
    }
    w
}

/// Likelihood of `ts` at fixed coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SarimaEvaluation {
    pub loglik: f64,
    pub residuals: Vec<f64>,
    pub next_state: Vec<f64>,
    pub penalized: bool,
}

pub fn evaluate_sarima(ts: &TimeSeries, order: &SarimaOrder, coefs: &SarimaCoefficients) -> Result<SarimaEvaluation> {
    order.validate()?;
    let w = difference_for(ts, order);
    let (phi, theta) = expand_polynomials(order, coefs)?;
    let out = filter(&phi, &theta, &w, coefs.mean)?;
    Ok(SarimaEvaluation {
        loglik: out.loglik,
        residuals: out.residuals,
        next_state: out.next_state,
        penalized: out.penalized,
    })
}

fn filter(phi: &[f64], theta: &[f64], w: &[f64], mean: Option<f64>) -> Result<KalmanOutput> {
    match mean {
        Some(mu) => {
            let centred: Vec<f64> = w.iter().map(|v| v - mu).collect();
            kalman_loglik(phi, theta, &centred)
        }
        None => kalman_loglik(phi, theta, w),
    }
}

/// Maps unconstrained reals onto causal AR and invertible MA polynomials
/// through partial autocorrelations `tanh(u)`.
struct Transform {
    order: SarimaOrder,
    with_mean: bool,
    centre: f64,
    scale: f64,
}

#[cfg(test)]
const PACF_LIMIT: f64 = 0.99;

fn ar_block(u: &[f64]) -> Vec<f64> {
    pacf_to_ar(&u.iter().map(|v| v.tanh()).collect::<Vec<_>>())
}

fn ma_block(u: &[f64]) -> Vec<f64> {
    ar_block(u).into_iter().map(|c| -c).collect()
}

#[cfg(test)]
fn unblock(ar: &[f64]) -> Vec<f64> {
    let pacf = ar_to_pacf(ar).unwrap_or_else(|| vec![0.0; ar.len()]);
    pacf.iter().map(|r| r.clamp(-PACF_LIMIT, PACF_LIMIT).atanh()).collect()
}

impl Transform {
    fn dimension(&self) -> usize {
        self.order.coefficient_count() + usize::from(self.with_mean)
    }

    fn decode(&self, u: &[f64]) -> SarimaCoefficients {
        let o = &self.order;
        let (ar, rest) = u.split_at(o.p);
        let (ma, rest) = rest.split_at(o.q);
        let (sar, rest) = rest.split_at(o.sp);
        let (sma, rest) = rest.split_at(o.sq);
        SarimaCoefficients {
            ar: ar_block(ar),
            ma: ma_block(ma),
            sar: ar_block(sar),
            sma: ma_block(sma),
            mean: self.with_mean.then(|| self.centre + self.scale * rest[0]),
        }
    }

    #[cfg(test)]
    fn encode(&self, c: &SarimaCoefficients) -> Vec<f64> {
        let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let mut u = unblock(&c.ar);
        u.extend(unblock(&neg(&c.ma)));
        u.extend(unblock(&c.sar));
        u.extend(unblock(&neg(&c.sma)));
        if let Some(mu) = c.mean {
            u.push((mu - self.centre) / self.scale);
        }
        u
    }
}

/// Conditional sum of squares, `0.5 · n · ln(SSE / n)` over observations
/// after the first `p + mP`.
fn css_objective(phi: &[f64], theta: &[f64], w: &[f64]) -> f64 {
    let start = phi.len();
    if start >= w.len() {
        return f64::INFINITY;
    }
    let mut e = vec![0.0; w.len()];
    let mut ssq = 0.0;
    for t in start..w.len() {
        let mut v = w[t];
        for (i, ph) in phi.iter().enumerate() {
            v -= ph * w[t - 1 - i];
        }
        for (j, th) in theta.iter().enumerate().take(t) {
            v -= th * e[t - 1 - j];
        }
        e[t] = v;
        ssq += v * v;
    }
    let count = (w.len() - start) as f64;
    0.5 * count * (ssq / count).ln()
}

fn sarima_options(dimension: usize) -> OptimizerOptions {
    OptimizerOptions {
        max_iterations: 2_000 * dimension.max(1),
        ftol: 1e-9,
        initial_step: 0.1,
        restarts: 1,
        restart_shrink: 0.5,
    }
}

/// Exact maximum-likelihood fit on the differenced series. A mean is
/// estimated only when `d + D = 0`.
pub fn fit_sarima(ts: &TimeSeries, order: &SarimaOrder) -> Result<SarimaFit> {
    order.validate()?;
    if order.sp + order.sd + order.sq > 0 && order.period != ts.period() {
        return Err(Error::InvalidArgument(format!(
            "order period {} does not match series period {}",
            order.period,
            ts.period()
        )));
    }
    let n = ts.len();
    let lost = order.lost_to_differencing();
    let needed = lost + order.ar_degree() + order.ma_degree() + 2;
    if n < needed {
        return Err(Error::InsufficientData { needed, got: n });
    }
    let w = difference_for(ts, order);
    let with_mean = order.d + order.sd == 0;
    let centre = mean(&w);
    let spread = (w.iter().map(|v| (v - centre).powi(2)).sum::<f64>() / w.len() as f64).sqrt();
    let transform = Transform { order: *order, with_mean, centre, scale: if spread > 0.0 { spread } else { 1.0 } };
    let dim = transform.dimension();
    let opts = sarima_options(dim);

    let expand = |c: &SarimaCoefficients| expand_polynomials(order, c).expect("decoded counts match order");
    let demean = |mu: Option<f64>| -> Vec<f64> {
        match mu {
            Some(m) => w.iter().map(|v| v - m).collect(),
            None => w.clone(),
        }
    };

    let css = |u: &[f64]| {
        let c = transform.decode(u);
        let (phi, theta) = expand(&c);
        css_objective(&phi, &theta, &demean(c.mean))
    };
    let zero = vec![0.0; dim];
    let start = match nelder_mead(css, &zero, &opts) {
        Ok(r) if r.minimum.is_finite() => r.argmin,
        _ => zero.clone(),
    };

    let neg_loglik = |u: &[f64]| {
        let c = transform.decode(u);
        let (phi, theta) = expand(&c);
        match filter(&phi, &theta, &w, c.mean) {
            Ok(out) => -out.loglik,
            Err(_) => f64::INFINITY,
        }
    };
    let start = if neg_loglik(&start).is_finite() && neg_loglik(&start) <= neg_loglik(&zero) { start } else { zero };
    let res = nelder_mead(neg_loglik, &start, &opts)
        .map_err(|e| Error::FitFailed(format!("{order}: {e}")))?;

    let coefficients = transform.decode(&res.argmin);
    let (phi, theta) = expand(&coefficients);
    let out = filter(&phi, &theta, &w, coefficients.mean)?;
    if out.penalized {
        return Err(Error::FitFailed(format!("{order}: optimum lies on the stationarity boundary")));
    }
    let natural = |x: &[f64]| {
        let c = SarimaCoefficients::from_slice(order, with_mean, x);
        let (phi, theta) = expand(&c);
        match filter(&phi, &theta, &w, c.mean) {
            Ok(o) if !o.penalized => -o.loglik,
            _ => f64::NAN,
        }
    };
    let standard_errors = numerical_hessian(natural, &coefficients.to_vec())
        .ok()
        .and_then(|h| standard_errors(&h));

    let n_used = w.len();
    let ncoef = dim;
    let ssq: f64 = out.residuals.iter().map(|e| e * e).sum();
    let sigma2 = ssq / (n_used - ncoef) as f64;
    let k = (ncoef + 1) as f64;
    let nu = n_used as f64;
    let aic = -2.0 * out.loglik + 2.0 * k;
    let aicc = aic + 2.0 * k * (k + 1.0) / (nu - k - 1.0);
    let bic = aic + k * (nu.ln() - 2.0);

    Ok(SarimaFit {
        order: *order,
        coefficients,
        standard_errors,
        sigma2,
        loglik: out.loglik,
        aic,
        aicc,
        bic,
        residuals: out.residuals,
        phi,
        theta,
        training: ts.clone(),
        n_used,
        converged: res.converged,
        iterations: res.iterations,
    })
}
