//! Lag-polynomial algebra. Polynomials in full form carry the constant term
//! at index 0; AR/MA coefficient vectors omit it and follow the
//! `1 - φ₁B - …` / `1 + θ₁B + …` sign conventions.

use crate::error::Result;

use super::order::{SarimaCoefficients, SarimaOrder};

/// Product of two full-form polynomials.
pub fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 - Σ φ_i B^{i·stride}` in full form.
fn ar_full(coefs: &[f64], stride: usize) -> Vec<f64> {
    let mut p = vec![0.0; coefs.len() * stride + 1];
    p[0] = 1.0;
    for (i, c) in coefs.iter().enumerate() {
        p[(i + 1) * stride] = -c;
    }
    p
}

/// `1 + Σ θ_i B^{i·stride}` in full form.
fn ma_full(coefs: &[f64], stride: usize) -> Vec<f64> {
    let mut p = vec![0.0; coefs.len() * stride + 1];
    p[0] = 1.0;
    for (i, c) in coefs.iter().enumerate() {
        p[(i + 1) * stride] = *c;
    }
    p
}

/// Expanded `φ(B)Φ(Bᵐ)` and `θ(B)Θ(Bᵐ)` as coefficient vectors of length
/// `p + mP` and `q + mQ`.
pub fn expand_polynomials(order: &SarimaOrder, coefs: &SarimaCoefficients) -> Result<(Vec<f64>, Vec<f64>)> {
    coefs.check_against(order)?;
    let m = order.period;
    let ar = multiply(&ar_full(&coefs.ar, 1), &ar_full(&coefs.sar, m));
    let ma = multiply(&ma_full(&coefs.ma, 1), &ma_full(&coefs.sma, m));
    let phi = ar[1..].iter().map(|c| -c).collect();
    let theta = ma[1..].to_vec();
    Ok((phi, theta))
}

/// `(1 - B)^d (1 - Bᵐ)^D` in full form.
pub fn differencing_operator(d: usize, sd: usize, period: usize) -> Vec<f64> {
    let mut op = vec![1.0];
    for _ in 0..d {
        op = multiply(&op, &[1.0, -1.0]);
    }
    let mut seasonal = vec![0.0; period + 1];
    seasonal[0] = 1.0;
    seasonal[period] = -1.0;
    for _ in 0..sd {
        op = multiply(&op, &seasonal);
    }
    op
}

/// AR coefficients of the integrated operator `φ(B)Φ(Bᵐ)(1-B)^d(1-Bᵐ)^D`.
pub fn integrated_ar(order: &SarimaOrder, phi: &[f64]) -> Vec<f64> {
    let full = multiply(&ar_full(phi, 1), &differencing_operator(order.d, order.sd, order.period));
    full[1..].iter().map(|c| -c).collect()
}

/// `ψ_0..ψ_{count-1}` of the MA(∞) form: `ψ_j = θ_j + Σ φ_i ψ_{j-i}`, `ψ_0 = 1`.
pub fn psi_weights(phi: &[f64], theta: &[f64], count: usize) -> Vec<f64> {
    let mut psi = vec![0.0; count];
    if count == 0 {
        return psi;
    }
    psi[0] = 1.0;
    for j in 1..count {
        let mut v = theta.get(j - 1).copied().unwrap_or(0.0);
        for (i, ph) in phi.iter().enumerate().take(j) {
            v += ph * psi[j - 1 - i];
        }
        psi[j] = v;
    }
    psi
}

/// Durbin-Levinson map from partial autocorrelations to AR coefficients.
/// Every `|r_k| < 1` yields a causal polynomial.
pub fn pacf_to_ar(pacf: &[f64]) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::with_capacity(pacf.len());
    for (k, &r) in pacf.iter().enumerate() {
        let prev = phi.clone();
        for j in 0..k {
            phi[j] = prev[j] - r * prev[k - 1 - j];
        }
        phi.push(r);
    }
    phi
}

/// Inverse of [`pacf_to_ar`] (step-down recursion). `None` when some
/// partial autocorrelation reaches modulus one, i.e. the polynomial is not causal.
pub fn ar_to_pacf(phi: &[f64]) -> Option<Vec<f64>> {
    let mut cur = phi.to_vec();
    let mut pacf = vec![0.0; phi.len()];
    for k in (0..phi.len()).rev() {
        let a = cur[k];
        if !(a.abs() < 1.0) {
            return None;
        }
        pacf[k] = a;
        let denom = 1.0 - a * a;
        let next: Vec<f64> = (0..k).map(|j| (cur[j] + a * cur[k - 1 - j]) / denom).collect();
        cur = next;
    }
    Some(pacf)
}

/// All roots of `1 - Σ φ_i z^i` lie outside the unit circle.
pub fn is_causal(phi: &[f64]) -> bool {
    let trimmed = trim_trailing_zeros(phi);
    ar_to_pacf(trimmed).is_some()
}

/// All roots of `1 + Σ θ_i z^i` lie outside the unit circle.
pub fn is_invertible(theta: &[f64]) -> bool {
    let neg: Vec<f64> = trim_trailing_zeros(theta).iter().map(|t| -t).collect();
    ar_to_pacf(&neg).is_some()
}

fn trim_trailing_zeros(v: &[f64]) -> &[f64] {
    let len = v.iter().rposition(|c| *c != 0.0).map_or(0, |i| i + 1);
    &v[..len]
}
