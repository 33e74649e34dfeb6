//! Differencing tests and stepwise order search.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::{difference_values, mean, TimeSeries};

use super::fit::{fit_sarima, SarimaFit};
use super::order::SarimaOrder;
use super::poly::is_causal;

/// 5% critical value of the KPSS level-stationarity statistic.
pub const KPSS_CRITICAL_5PCT: f64 = 0.463;
pub const SEASONAL_STRENGTH_THRESHOLD: f64 = 0.64;

pub const MAX_P: usize = 5;
pub const MAX_Q: usize = 5;
pub const MAX_SP: usize = 2;
pub const MAX_SQ: usize = 2;

/// Candidates whose AR or MA roots lie within this modulus are discarded.
const MIN_ROOT_MODULUS: f64 = 1.01;

/// KPSS level statistic with Bartlett long-run variance and bandwidth
/// `trunc(4 (n/100)^{1/4})`.
pub fn kpss_level(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mu = mean(values);
    let e: Vec<f64> = values.iter().map(|v| v - mu).collect();
    let nf = n as f64;
    let lags = ((4.0 * (nf / 100.0).powf(0.25)) as usize).min(n - 1);
    let mut lrv = e.iter().map(|v| v * v).sum::<f64>() / nf;
    for s in 1..=lags {
        let cov: f64 = e[s..].iter().zip(&e).map(|(a, b)| a * b).sum::<f64>() / nf;
        lrv += 2.0 * (1.0 - s as f64 / (lags as f64 + 1.0)) * cov;
    }
    if !(lrv > 0.0) {
        return Err(Error::DegenerateSeries("zero long-run variance".into()));
    }
    let mut partial = 0.0;
    let mut eta = 0.0;
    for v in &e {
        partial += v;
        eta += partial * partial;
    }
    Ok(eta / (nf * nf * lrv))
}

/// `max(0, 1 - Var(R) / Var(S + R))` from a classical additive decomposition
/// with a centred `2×m` moving-average trend.
pub fn seasonal_strength(ts: &TimeSeries) -> Result<f64> {
    let m = ts.period();
    let y = ts.values();
    let n = y.len();
    if m < 2 {
        return Ok(0.0);
    }
    if n < 2 * m + 1 {
        return Err(Error::InsufficientData { needed: 2 * m + 1, got: n });
    }
    let half = m / 2;
    let mut trend = vec![f64::NAN; n];
    for t in half..n - half {
        trend[t] = if m.is_multiple_of(2) {
            let inner: f64 = y[t + 1 - half..t + half].iter().sum();
            (0.5 * y[t - half] + inner + 0.5 * y[t + half]) / m as f64
        } else {
            y[t - half..=t + half].iter().sum::<f64>() / m as f64
        };
    }
    let detrended: Vec<f64> = y.iter().zip(&trend).map(|(v, tr)| v - tr).collect();
    let mut figure = vec![0.0; m];
    for (k, slot) in figure.iter_mut().enumerate() {
        let vals: Vec<f64> = detrended
            .iter()
            .enumerate()
            .filter(|(t, v)| ts.season_of(*t) == k && v.is_finite())
            .map(|(_, v)| *v)
            .collect();
        *slot = mean(&vals);
    }
    let centre = mean(&figure);
    figure.iter_mut().for_each(|s| *s -= centre);

    let (mut rem, mut sr) = (Vec::new(), Vec::new());
    for (t, d) in detrended.iter().enumerate() {
        if d.is_finite() {
            let s = figure[ts.season_of(t)];
            rem.push(d - s);
            sr.push(*d);
        }
    }
    let var = |v: &[f64]| {
        let mu = mean(v);
        v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
    };
    let total = var(&sr);
    if !(total > 0.0) {
        return Ok(0.0);
    }
    Ok((1.0 - var(&rem) / total).max(0.0))
}

fn check_length(ts: &TimeSeries) -> Result<()> {
    let needed = 3 * ts.period();
    if ts.len() < needed {
        return Err(Error::InsufficientData { needed, got: ts.len() });
    }
    Ok(())
}

/// Number of seasonal differences (0 or 1) from the seasonal strength.
pub fn nsdiffs(ts: &TimeSeries) -> Result<usize> {
    check_length(ts)?;
    if ts.period() < 2 {
        return Ok(0);
    }
    Ok(usize::from(seasonal_strength(ts)? > SEASONAL_STRENGTH_THRESHOLD))
}

/// Smallest number of first differences (at most 2) after which KPSS does
/// not reject level stationarity.
pub fn ndiffs(ts: &TimeSeries) -> Result<usize> {
    check_length(ts)?;
    ndiffs_values(ts.values())
}

fn ndiffs_values(values: &[f64]) -> Result<usize> {
    let mut x = values.to_vec();
    for d in 0..2 {
        match kpss_level(&x) {
            Ok(stat) if stat < KPSS_CRITICAL_5PCT => return Ok(d),
            Ok(_) => {}
            Err(Error::DegenerateSeries(_)) => return Ok(d),
            Err(e) => return Err(e),
        }
        x = difference_values(&x, 1);
        if x.len() < 2 {
            return Ok(d + 1);
        }
    }
    Ok(2)
}

/// All roots of `1 - Σ c_i z^i` have modulus at least `radius`.
fn roots_outside(coefs: &[f64], radius: f64) -> bool {
    let scaled: Vec<f64> = coefs.iter().enumerate().map(|(i, c)| c * radius.powi(i as i32 + 1)).collect();
    is_causal(&scaled)
}

fn acceptable(fit: &SarimaFit) -> bool {
    let neg_theta: Vec<f64> = fit.theta.iter().map(|t| -t).collect();
    fit.aicc.is_finite() && roots_outside(&fit.phi, MIN_ROOT_MODULUS) && roots_outside(&neg_theta, MIN_ROOT_MODULUS)
}

/// Outcome of one candidate in the stepwise search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStep {
    pub order: SarimaOrder,
    /// `None` when the fit failed or was rejected.
    pub aicc: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct AutoSarima {
    pub fit: SarimaFit,
    /// Every candidate evaluated, in evaluation order.
    pub trace: Vec<SearchStep>,
}

/// Stepwise AICc search over `(p, q)(P, Q)` with `d` and `D` chosen by
/// [`ndiffs`] and [`nsdiffs`].
pub fn auto_sarima(ts: &TimeSeries) -> Result<SarimaFit> {
    auto_sarima_traced(ts).map(|a| a.fit)
}

pub fn auto_sarima_traced(ts: &TimeSeries) -> Result<AutoSarima> {
    check_length(ts)?;
    let m = ts.period();
    let seasonal = m > 1;
    let sd = if seasonal { nsdiffs(ts)? } else { 0 };
    let mut x = ts.values().to_vec();
    for _ in 0..sd {
        x = difference_values(&x, m);
    }
    let d = ndiffs_values(&x)?;

    let make = |p: usize, q: usize, sp: usize, sq: usize| {
        if seasonal {
            SarimaOrder::new((p, d, q), (sp, sd, sq), m)
        } else {
            SarimaOrder::new((p, d, q), (0, 0, 0), 1)
        }
    };
    let seeds: Vec<(usize, usize, usize, usize)> = if seasonal {
        vec![(2, 2, 1, 1), (0, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1)]
    } else {
        vec![(2, 2, 0, 0), (0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0)]
    };

    let mut cache: HashMap<SarimaOrder, Option<SarimaFit>> = HashMap::new();
    let mut trace = Vec::new();
    let mut evaluate = |orders: Vec<SarimaOrder>, cache: &mut HashMap<SarimaOrder, Option<SarimaFit>>| {
        let fresh: Vec<SarimaOrder> = orders.into_iter().filter(|o| !cache.contains_key(o)).collect();
        let fits: Vec<Option<SarimaFit>> =
            fresh.par_iter().map(|o| fit_sarima(ts, o).ok().filter(acceptable)).collect();
        for (o, f) in fresh.into_iter().zip(fits) {
            trace.push(SearchStep { order: o, aicc: f.as_ref().map(|f| f.aicc) });
            cache.insert(o, f);
        }
    };
    let best_of = |orders: &[SarimaOrder], cache: &HashMap<SarimaOrder, Option<SarimaFit>>| {
        orders
            .iter()
            .filter_map(|o| cache.get(o).and_then(|f| f.as_ref()).map(|f| (*o, f.aicc)))
            .fold(None, |acc: Option<(SarimaOrder, f64)>, (o, a)| match acc {
                Some((_, b)) if b <= a => acc,
                _ => Some((o, a)),
            })
    };

    let seed_orders: Vec<SarimaOrder> =
        seeds.iter().map(|&(p, q, sp, sq)| make(p, q, sp, sq)).collect::<Result<_>>()?;
    evaluate(seed_orders.clone(), &mut cache);
    let Some((mut current, mut current_aicc)) = best_of(&seed_orders, &cache) else {
        return Err(Error::FitFailed("no seed order could be fitted".into()));
    };

    loop {
        let mut neighbours = Vec::new();
        let (p, q, sp, sq) = (current.p, current.q, current.sp, current.sq);
        let mut push = |p: isize, q: isize, sp: isize, sq: isize| {
            let ok = (0..=MAX_P as isize).contains(&p)
                && (0..=MAX_Q as isize).contains(&q)
                && (0..=MAX_SP as isize).contains(&sp)
                && (0..=MAX_SQ as isize).contains(&sq)
                && (seasonal || (sp == 0 && sq == 0));
            if ok {
                if let Ok(o) = make(p as usize, q as usize, sp as usize, sq as usize) {
                    neighbours.push(o);
                }
            }
        };
        let (p, q, sp, sq) = (p as isize, q as isize, sp as isize, sq as isize);
        for delta in [-1, 1] {
            push(p + delta, q, sp, sq);
            push(p, q + delta, sp, sq);
            push(p, q, sp + delta, sq);
            push(p, q, sp, sq + delta);
        }
        evaluate(neighbours.clone(), &mut cache);
        match best_of(&neighbours, &cache) {
            Some((o, a)) if a < current_aicc => {
                current = o;
                current_aicc = a;
            }
            _ => break,
        }
    }
    let fit = cache.remove(&current).flatten().expect("current order has a fit");
    Ok(AutoSarima { fit, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::MonthStamp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn series(values: Vec<f64>) -> TimeSeries {
        TimeSeries::monthly(MonthStamp::new(1980, 1).unwrap(), values).unwrap()
    }

    /// Direct transcription of the statistic, computed with explicit loops.
    fn kpss_oracle(y: &[f64]) -> f64 {
        let n = y.len();
        let mu: f64 = y.iter().sum::<f64>() / n as f64;
        let l = (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize;
        let mut s2: f64 = y.iter().map(|v| (v - mu).powi(2)).sum();
        for s in 1..=l {
            let w = 1.0 - s as f64 / (l as f64 + 1.0);
            let mut acc = 0.0;
            for t in s..n {
                acc += (y[t] - mu) * (y[t - s] - mu);
            }
            s2 += 2.0 * w * acc;
        }
        s2 /= n as f64;
        let mut total = 0.0;
        for t in 0..n {
            let st: f64 = y[..=t].iter().map(|v| v - mu).sum();
            total += st * st;
        }
        total / (n as f64 * n as f64 * s2)
    }

    #[test]
    fn kpss_matches_loop_oracle() {
        let y = noise(300, 4);
        assert!((kpss_level(&y).unwrap() - kpss_oracle(&y)).abs() < 1e-12);
        assert!(kpss_level(&[2.0; 10]).is_err());
    }

    #[test]
    fn white_noise_needs_no_differencing() {
        let ts = series(noise(240, 8));
        assert_eq!(nsdiffs(&ts).unwrap(), 0);
        assert_eq!(ndiffs(&ts).unwrap(), 0);
    }

    #[test]
    fn random_walk_needs_one_difference() {
        let mut level = 0.0;
        let walk: Vec<f64> = noise(500, 21)
            .into_iter()
            .map(|e| {
                level += e;
                level
            })
            .collect();
        assert!(kpss_oracle(&walk) > KPSS_CRITICAL_5PCT);
        assert_eq!(ndiffs(&series(walk)).unwrap(), 1);
    }

    #[test]
    fn strong_seasonality_is_detected() {
        let y: Vec<f64> = noise(144, 3)
            .iter()
            .enumerate()
            .map(|(t, e)| 10.0 * (2.0 * std::f64::consts::PI * t as f64 / 12.0).sin() + 0.5 * e)
            .collect();
        let ts = series(y);
        assert!(seasonal_strength(&ts).unwrap() > 0.9);
        assert_eq!(nsdiffs(&ts).unwrap(), 1);
    }

    #[test]
    fn short_series_rejected() {
        let ts = series(noise(30, 1));
        assert!(matches!(ndiffs(&ts), Err(Error::InsufficientData { needed: 36, .. })));
        assert!(nsdiffs(&ts).is_err());
    }

    #[test]
    fn root_radius_check() {
        assert!(roots_outside(&[0.9], 1.01));
        assert!(!roots_outside(&[0.995], 1.01));
    }
}
