//! Exact Gaussian ARMA likelihood through a Harvey-form state-space filter.
//!
//! The model is `w_t = Σ φ_i w_{t-i} + ε_t + Σ θ_j ε_{t-j}`. The filter runs
//! with unit innovation variance and σ² is concentrated out afterwards.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::poly::{is_causal, psi_weights};

/// Log-likelihood reported for a non-causal AR polynomial.
pub const NONCAUSAL_PENALTY: f64 = -1.0e10;

const FREEZE_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct KalmanOutput {
    /// Concentrated log-likelihood, or [`NONCAUSAL_PENALTY`] when `penalized`.
    pub loglik: f64,
    /// `(1/n) Σ v_t² / F_t`.
    pub sigma2_hat: f64,
    /// Standardized one-step innovations `v_t / sqrt(F_t)`, in data units.
    pub residuals: Vec<f64>,
    /// Predicted state for the step after the last observation.
    pub next_state: Vec<f64>,
    /// The AR polynomial was outside the causal region; nothing was filtered.
    pub penalized: bool,
}

impl KalmanOutput {
    fn penalty() -> Self {
        Self {
            loglik: NONCAUSAL_PENALTY,
            sigma2_hat: f64::NAN,
            residuals: vec![],
            next_state: vec![],
            penalized: true,
        }
    }
}

/// State dimension `max(p, q + 1)`.
pub fn state_dimension(phi: &[f64], theta: &[f64]) -> usize {
    phi.len().max(theta.len() + 1)
}

/// Autocovariances `γ(0..=max_lag)` of a causal ARMA process with unit
/// innovation variance. `None` if the Yule-Walker system is singular.
pub fn autocovariances(phi: &[f64], theta: &[f64], max_lag: usize) -> Option<Vec<f64>> {
    let p = phi.len();
    let q = theta.len();
    let psi = psi_weights(phi, theta, q + 1);
    let theta_at = |j: usize| if j == 0 { 1.0 } else { theta.get(j - 1).copied().unwrap_or(0.0) };
    let rhs = |k: usize| (k..=q).map(|j| theta_at(j) * psi[j - k]).sum::<f64>();

    let mut a = DMatrix::<f64>::zeros(p + 1, p + 1);
    let mut b = DVector::<f64>::zeros(p + 1);
    for k in 0..=p {
        a[(k, k)] += 1.0;
        for i in 1..=p {
            a[(k, k.abs_diff(i))] -= phi[i - 1];
        }
        b[k] = rhs(k);
    }
    let head = a.lu().solve(&b)?;
    let mut gamma: Vec<f64> = head.iter().copied().collect();
    gamma.truncate(max_lag + 1);
    for k in gamma.len()..=max_lag {
        let mut v = rhs(k);
        for i in 1..=p {
            v += phi[i - 1] * gamma[k - i];
        }
        gamma.push(v);
    }
    if gamma.iter().all(|g| g.is_finite()) && gamma[0] > 0.0 {
        Some(gamma)
    } else {
        None
    }
}

/// Stationary covariance of the Harvey state vector (row-major `r × r`).
///
/// State component `i` (1-based) is
/// `Σ_{k=0}^{r-i} φ_{i+k} w_{t-1-k} + Σ_{k=0}^{r-i} θ_{i-1+k} ε_{t-k}` with `θ_0 = 1`.
pub fn stationary_covariance(phi: &[f64], theta: &[f64]) -> Option<Vec<f64>> {
    let r = state_dimension(phi, theta);
    let gamma = autocovariances(phi, theta, r)?;
    let psi = psi_weights(phi, theta, r + 1);
    let ph = |j: usize| if j >= 1 { phi.get(j - 1).copied().unwrap_or(0.0) } else { 0.0 };
    let th = |j: usize| if j == 0 { 1.0 } else { theta.get(j - 1).copied().unwrap_or(0.0) };

    // Row i (0-based) of u / v holds the weights of state i on w_{t-1-k} / ε_{t-k}.
    let u = DMatrix::from_fn(r, r, |i, k| ph(i + 1 + k));
    let v = DMatrix::from_fn(r, r, |i, k| th(i + k));
    let lag_cov = DMatrix::from_fn(r, r, |k, kp| gamma[k.abs_diff(kp)]);
    // E[w_{t-1-k} ε_{t-k'}] = ψ_{k'-1-k} for k' > k.
    let cross = DMatrix::from_fn(r, r, |k, kp| if kp > k { psi[kp - 1 - k] } else { 0.0 });

    let cov = &u * (&lag_cov * u.transpose() + &cross * v.transpose())
        + &v * (cross.transpose() * u.transpose() + v.transpose());
    let mut out = vec![0.0; r * r];
    for i in 0..r {
        for l in 0..=i {
            let s = 0.5 * (cov[(i, l)] + cov[(l, i)]);
            out[i * r + l] = s;
            out[l * r + i] = s;
        }
    }
    Some(out)
}

/// One covariance step `T (P - P e₁ e₁ᵀ P / f) Tᵀ + R Rᵀ` for the companion
/// transition with first column `φ`, written into `out`. Returns the largest
/// absolute change from `p`.
fn update_covariance(phi_r: &[f64], rvec: &[f64], p: &[f64], r: usize, m: &mut [f64], out: &mut [f64]) -> f64 {
    let f = p[0];
    for a in 0..r {
        let scale = p[a * r] / f;
        for b in 0..r {
            m[a * r + b] = p[a * r + b] - scale * p[b];
        }
    }
    let mut change = 0.0f64;
    for i in 0..r {
        for j in i..r {
            let mut v = rvec[i] * rvec[j];
            if i + 1 < r {
                if j + 1 < r {
                    v += m[(i + 1) * r + j + 1];
                }
                if phi_r[j] != 0.0 {
                    v += phi_r[j] * m[(i + 1) * r];
                }
            }
            if phi_r[i] != 0.0 {
                v += phi_r[i] * (phi_r[j] * m[0] + if j + 1 < r { m[j + 1] } else { 0.0 });
            }
            change = change.max((v - p[i * r + j]).abs());
            out[i * r + j] = v;
            out[j * r + i] = v;
        }
    }
    change
}

/// Concentrated exact log-likelihood of a zero-mean ARMA process.
pub fn kalman_loglik(phi: &[f64], theta: &[f64], w: &[f64]) -> Result<KalmanOutput> {
    if w.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if w.iter().any(|v| !v.is_finite()) || phi.iter().chain(theta).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite input to the Kalman filter".into()));
    }
    if !is_causal(phi) {
        return Ok(KalmanOutput::penalty());
    }
    let r = state_dimension(phi, theta);
    let Some(mut p) = stationary_covariance(phi, theta) else {
        return Ok(KalmanOutput::penalty());
    };
    let mut phi_r = vec![0.0; r];
    phi_r[..phi.len()].copy_from_slice(phi);
    let mut rvec = vec![0.0; r];
    rvec[0] = 1.0;
    rvec[1..=theta.len()].copy_from_slice(theta);

    let n = w.len();
    let mut a = vec![0.0; r];
    let mut a_filtered = vec![0.0; r];
    let mut next_p = vec![0.0; r * r];
    let mut filtered = vec![0.0; r * r];
    let mut residuals = Vec::with_capacity(n);
    let (mut ssq, mut sumlog) = (0.0, 0.0);
    let mut frozen = false;

    for &obs in w {
        let f = p[0];
        if !(f > 0.0) || !f.is_finite() {
            return Ok(KalmanOutput::penalty());
        }
        let v = obs - a[0];
        ssq += v * v / f;
        sumlog += f.ln();
        residuals.push(v / f.sqrt());

        for i in 0..r {
            a_filtered[i] = a[i] + p[i * r] * v / f;
        }
        for i in 0..r {
            a[i] = phi_r[i] * a_filtered[0] + if i + 1 < r { a_filtered[i + 1] } else { 0.0 };
        }
        if frozen {
            continue;
        }
        let change = update_covariance(&phi_r, &rvec, &p, r, &mut filtered, &mut next_p);
        std::mem::swap(&mut p, &mut next_p);
        frozen = change < FREEZE_TOLERANCE;
    }

    let nf = n as f64;
    let sigma2_hat = ssq / nf;
    if !(sigma2_hat > 0.0) {
        return Err(Error::DegenerateSeries("zero one-step prediction error".into()));
    }
    let loglik = -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + 1.0 + sigma2_hat.ln()) - 0.5 * sumlog;
    Ok(KalmanOutput { loglik, sigma2_hat, residuals, next_state: a, penalized: false })
}
