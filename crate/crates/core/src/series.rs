//! Monthly time-series container, calendar arithmetic, transforms and the
//! shared [`Forecast`] result type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::normal_quantile;

const MONTH_ABBREV: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// A calendar month. Ordered by `(year, month)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonthStamp {
    year: i32,
    month: u32,
}

impl MonthStamp {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidArgument(format!("month {month} outside 1..12")));
        }
        Ok(Self { year, month })
    }

    /// Parses the six-digit `YYYYMM` encoding used by EIA files.
    pub fn from_yyyymm(code: i64) -> Result<Self> {
        let year = i32::try_from(code / 100)
            .map_err(|_| Error::InvalidArgument(format!("YYYYMM {code} out of range")))?;
        Self::new(year, (code % 100) as u32)
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    pub fn yyyymm(self) -> i64 {
        i64::from(self.year) * 100 + i64::from(self.month)
    }

    fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    fn from_ordinal(ordinal: i64) -> Self {
        Self {
            year: ordinal.div_euclid(12) as i32,
            month: (ordinal.rem_euclid(12) + 1) as u32,
        }
    }

    /// Shifts by `months`, which may be negative.
    pub fn add_months(self, months: i64) -> Self {
        Self::from_ordinal(self.ordinal() + months)
    }

    /// Signed number of months from `self` to `other`.
    pub fn months_until(self, other: MonthStamp) -> i64 {
        other.ordinal() - self.ordinal()
    }

    /// Report label such as `Apr 2022`.
    pub fn label(self) -> String {
        format!("{} {}", MONTH_ABBREV[self.month as usize - 1], self.year)
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthStamp {
    type Err = Error;

    /// Accepts `YYYY-MM` or `YYYYMM`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse month {s:?}; expected YYYY-MM"));
        if let Some((y, m)) = s.split_once('-') {
            let year = y.parse().map_err(|_| bad())?;
            let month = m.parse().map_err(|_| bad())?;
            Self::new(year, month)
        } else if s.len() == 6 {
            Self::from_yyyymm(s.parse().map_err(|_| bad())?)
        } else {
            Err(bad())
        }
    }
}

/// Contiguous monthly observations. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    start: MonthStamp,
    values: Vec<f64>,
    period: usize,
}

impl TimeSeries {
    pub fn new(start: MonthStamp, values: Vec<f64>, period: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("time series must have at least one value".into()));
        }
        if period == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value at index {i}")));
        }
        Ok(Self { start, values, period })
    }

    /// Monthly series (period 12).
    pub fn monthly(start: MonthStamp, values: Vec<f64>) -> Result<Self> {
        Self::new(start, values, 12)
    }

    pub fn start(&self) -> MonthStamp {
        self.start
    }

    pub fn end(&self) -> MonthStamp {
        self.stamp_at(self.values.len() - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn stamp_at(&self, index: usize) -> MonthStamp {
        self.start.add_months(index as i64)
    }

    pub fn index_of(&self, stamp: MonthStamp) -> Option<usize> {
        let offset = self.start.months_until(stamp);
        (offset >= 0 && (offset as usize) < self.len()).then_some(offset as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (MonthStamp, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.stamp_at(i), v))
    }

    /// Lag-`lag` differences: `out[t] = y[t + lag] - y[t]`.
    pub fn difference(&self, lag: usize) -> Result<TimeSeries> {
        if lag == 0 || lag >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "difference lag {lag} must be in 1..{}",
                self.len()
            )));
        }
        let values = difference_values(&self.values, lag);
        Ok(Self { start: self.stamp_at(lag), values, period: self.period })
    }

    /// Inverse of [`difference`](Self::difference): rebuilds the level series from
    /// the `lag` anchor values that preceded `diffs`.
    pub fn integrate(diffs: &TimeSeries, lag: usize, anchors: &[f64]) -> Result<TimeSeries> {
        if lag == 0 || anchors.len() != lag {
            return Err(Error::InvalidArgument(format!(
                "integration needs exactly {lag} anchor values, got {}",
                anchors.len()
            )));
        }
        let mut values = anchors.to_vec();
        values.reserve(diffs.len());
        for (t, d) in diffs.values.iter().enumerate() {
            values.push(values[t] + d);
        }
        TimeSeries::new(diffs.start.add_months(-(lag as i64)), values, diffs.period)
    }

    /// Inclusive sub-series between two stamps.
    pub fn slice(&self, from: MonthStamp, to: MonthStamp) -> Result<TimeSeries> {
        if from > to {
            return Err(Error::Range(format!("slice start {from} is after end {to}")));
        }
        let i = self.index_of(from).ok_or_else(|| {
            Error::Range(format!("{from} outside series span {}..{}", self.start, self.end()))
        })?;
        let j = self.index_of(to).ok_or_else(|| {
            Error::Range(format!("{to} outside series span {}..{}", self.start, self.end()))
        })?;
        Ok(Self { start: from, values: self.values[i..=j].to_vec(), period: self.period })
    }

    /// Replaces the values, keeping the calendar anchor and period.
    pub fn with_values(&self, values: Vec<f64>) -> Result<TimeSeries> {
        TimeSeries::new(self.start, values, self.period)
    }

    /// Calendar position (0-based) of observation `index` within its seasonal cycle.
    /// For monthly data this is `month - 1`.
    pub fn season_of(&self, index: usize) -> usize {
        if self.period == 12 {
            self.stamp_at(index).month() as usize - 1
        } else {
            index % self.period
        }
    }
}

pub(crate) fn difference_values(values: &[f64], lag: usize) -> Vec<f64> {
    values.windows(lag + 1).map(|w| w[lag] - w[0]).collect()
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample autocorrelations `r_1..r_max_lag` with the biased (divide-by-n)
/// covariance normalization. `r_0 = 1` by construction and is not returned.
pub fn acf(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if max_lag == 0 || n < max_lag + 1 {
        return Err(Error::InvalidArgument(format!(
            "acf needs max_lag >= 1 and at least max_lag + 1 values (max_lag {max_lag}, n {n})"
        )));
    }
    let ybar = mean(values);
    let centred: Vec<f64> = values.iter().map(|v| v - ybar).collect();
    let denom: f64 = centred.iter().map(|c| c * c).sum();
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if denom == 0.0 || denom.sqrt() <= n as f64 * f64::EPSILON * scale {
        return Err(Error::DegenerateSeries("zero variance".into()));
    }
    Ok((1..=max_lag)
        .map(|k| {
            let num: f64 = centred[..n - k].iter().zip(&centred[k..]).map(|(a, b)| a * b).sum();
            num / denom
        })
        .collect())
}

/// Observations sharing one position in the seasonal cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subseries {
    /// 1-based season; the calendar month for monthly data.
    pub season: usize,
    pub stamps: Vec<MonthStamp>,
    pub values: Vec<f64>,
    pub mean: f64,
}

/// Splits a series into one subseries per season, in season order.
pub fn seasonal_subseries(ts: &TimeSeries) -> Result<Vec<Subseries>> {
    let m = ts.period();
    if ts.len() < m {
        return Err(Error::InvalidArgument(format!(
            "seasonal subseries need at least one full period ({m}), got {}",
            ts.len()
        )));
    }
    let mut groups: Vec<Subseries> = (1..=m)
        .map(|season| Subseries { season, stamps: Vec::new(), values: Vec::new(), mean: 0.0 })
        .collect();
    for (i, (stamp, v)) in ts.iter().enumerate() {
        let g = &mut groups[ts.season_of(i)];
        g.stamps.push(stamp);
        g.values.push(v);
    }
    for g in &mut groups {
        g.mean = mean(&g.values);
    }
    Ok(groups)
}

/// Confidence levels sorted ascending, defaulting to 80% and 95%.
pub fn normalize_levels(levels: &[f64]) -> Result<Vec<f64>> {
    if levels.is_empty() {
        return Ok(vec![0.80, 0.95]);
    }
    let mut out = levels.to_vec();
    if let Some(bad) = out.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::InvalidArgument(format!("confidence level {bad} outside (0, 1)")));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionInterval {
    pub level: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Point forecasts with prediction intervals, one entry per horizon step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    /// Month of the last observation the forecast conditions on.
    pub origin: MonthStamp,
    pub points: Vec<f64>,
    /// Sorted by ascending level.
    pub intervals: Vec<PredictionInterval>,
    pub method: String,
}

impl Forecast {
    /// Symmetric Gaussian bands `point ± z · sd[h]`.
    pub fn gaussian(
        origin: MonthStamp,
        points: Vec<f64>,
        sds: &[f64],
        levels: &[f64],
        method: impl Into<String>,
    ) -> Result<Self> {
        let levels = normalize_levels(levels)?;
        let intervals = levels
            .iter()
            .map(|&level| {
                let z = normal_quantile(0.5 * (1.0 + level))?;
                Ok(PredictionInterval {
                    level,
                    lower: points.iter().zip(sds).map(|(p, s)| p - z * s).collect(),
                    upper: points.iter().zip(sds).map(|(p, s)| p + z * s).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { origin, points, intervals, method: method.into() })
    }

    pub fn horizon(&self) -> usize {
        self.points.len()
    }

    /// Month of horizon step `h` (1-based).
    pub fn stamp(&self, h: usize) -> MonthStamp {
        self.origin.add_months(h as i64)
    }

    pub fn interval(&self, level: f64) -> Option<&PredictionInterval> {
        self.intervals.iter().find(|pi| (pi.level - level).abs() < 1e-12)
    }

    /// `lower <= point <= upper` at every step and wider levels contain narrower ones.
    pub fn is_consistent(&self) -> bool {
        let h = self.horizon();
        let ordered = self.intervals.iter().all(|pi| {
            pi.lower.len() == h
                && pi.upper.len() == h
                && (0..h).all(|i| pi.lower[i] <= self.points[i] && self.points[i] <= pi.upper[i])
        });
        let nested = self.intervals.windows(2).all(|w| {
            (0..h).all(|i| w[1].lower[i] <= w[0].lower[i] && w[0].upper[i] <= w[1].upper[i])
        });
        ordered && nested
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ym(y: i32, m: u32) -> MonthStamp {
        MonthStamp::new(y, m).unwrap()
    }

    #[test]
    fn month_arithmetic_crosses_years() {
        assert_eq!(ym(2022, 12).add_months(1), ym(2023, 1));
        assert_eq!(ym(2022, 1).add_months(-1), ym(2021, 12));
        assert_eq!(ym(2022, 4).add_months(23), ym(2024, 3));
        assert_eq!(ym(1973, 1).months_until(ym(2022, 3)), 590);
        assert_eq!(ym(2022, 4).label(), "Apr 2022");
        assert!(MonthStamp::new(2022, 13).is_err());
        assert!(MonthStamp::new(2022, 0).is_err());
    }

    #[test]
    fn month_parsing() {
        assert_eq!("2022-03".parse::<MonthStamp>().unwrap(), ym(2022, 3));
        assert_eq!("202203".parse::<MonthStamp>().unwrap(), ym(2022, 3));
        assert!("2022/03".parse::<MonthStamp>().is_err());
        assert!("202213".parse::<MonthStamp>().is_err());
    }

    #[test]
    fn rejects_bad_series() {
        assert!(TimeSeries::monthly(ym(2000, 1), vec![]).is_err());
        assert!(TimeSeries::monthly(ym(2000, 1), vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new(ym(2000, 1), vec![1.0], 0).is_err());
    }

    #[test]
    fn difference_examples() {
        let ts = TimeSeries::monthly(ym(2000, 1), vec![5.0; 4]).unwrap();
        assert_eq!(ts.difference(1).unwrap().values(), &[0.0, 0.0, 0.0]);

        let ts = TimeSeries::monthly(ym(2000, 1), vec![1.0, 3.0, 6.0, 10.0]).unwrap();
        let d = ts.difference(1).unwrap();
        assert_eq!(d.values(), &[2.0, 3.0, 4.0]);
        assert_eq!(d.start(), ym(2000, 2));
        assert!(ts.difference(4).is_err());
        assert!(ts.difference(0).is_err());
    }

    #[test]
    fn seasonal_difference_removes_sine() {
        let values: Vec<f64> = (0..36)
            .map(|t| {
                let t = t as f64;
                10.0 + 0.5 * t + 3.0 * (2.0 * std::f64::consts::PI * t / 12.0).sin()
            })
            .collect();
        let ts = TimeSeries::monthly(ym(2010, 1), values.clone()).unwrap();
        let d = ts.difference(12).unwrap();
        assert_eq!(d.len(), 24);
        for (t, got) in d.values().iter().enumerate() {
            let oracle = values[t + 12] - values[t];
            assert!((got - oracle).abs() < 1e-12);
            // trend of 0.5 per month leaves 6 per year; the sine cancels
            assert!((got - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn acf_alternating() {
        let v = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let r = acf(&v, 1).unwrap();
        assert!((r[0] + 0.875).abs() < 1e-12);
    }

    #[test]
    fn acf_errors() {
        assert!(matches!(acf(&[2.0; 10], 3), Err(Error::DegenerateSeries(_))));
        assert!(acf(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn acf_white_noise_within_band() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let v: Vec<f64> = (0..500).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = acf(&v, 40).unwrap();
        let band = 2.0 / (500f64).sqrt();
        let inside = r.iter().filter(|x| x.abs() < band).count();
        assert!(inside as f64 / 40.0 >= 0.9, "{inside} of 40 inside");
    }

    #[test]
    fn subseries_alignment() {
        let ts = TimeSeries::monthly(ym(2000, 1), (0..24).map(f64::from).collect()).unwrap();
        let subs = seasonal_subseries(&ts).unwrap();
        assert_eq!(subs.len(), 12);
        assert!(subs.iter().all(|s| s.values.len() == 2));

        let ts = TimeSeries::monthly(ym(2000, 4), (0..14).map(f64::from).collect()).unwrap();
        let subs = seasonal_subseries(&ts).unwrap();
        assert_eq!(subs[3].values[0], 0.0);
        assert_eq!(subs[3].stamps[0], ym(2000, 4));

        let short = TimeSeries::monthly(ym(2000, 1), vec![1.0; 11]).unwrap();
        assert!(seasonal_subseries(&short).is_err());
    }

    #[test]
    fn subseries_means_recover_offsets() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let offsets = [5.0, -3.0, 2.0, 0.0, 7.0, -6.0, 1.0, -1.0, 4.0, -4.0, 3.0, -8.0];
        let noise = Normal::new(0.0, 0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let values: Vec<f64> =
            (0..240).map(|t| 100.0 + offsets[t % 12] + noise.sample(&mut rng)).collect();
        let ts = TimeSeries::monthly(ym(1990, 1), values).unwrap();
        for (s, off) in seasonal_subseries(&ts).unwrap().iter().zip(offsets) {
            // 20 draws, sd of mean ~0.11
            assert!((s.mean - 100.0 - off).abs() < 0.5);
        }
    }

    #[test]
    fn slice_examples() {
        let ts = TimeSeries::monthly(ym(1999, 1), (0..36).map(f64::from).collect()).unwrap();
        assert_eq!(ts.slice(ts.start(), ts.end()).unwrap(), ts);
        let s = ts.slice(ym(2000, 1), ym(2000, 12)).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(s.values()[0], 12.0);
        assert_eq!(s.values()[11], 23.0);
        assert!(matches!(ts.slice(ym(1998, 1), ym(2000, 1)), Err(Error::Range(_))));
        assert!(matches!(ts.slice(ym(2000, 2), ym(2000, 1)), Err(Error::Range(_))));
    }

    #[test]
    fn levels_default_and_validate() {
        assert_eq!(normalize_levels(&[]).unwrap(), vec![0.8, 0.95]);
        assert_eq!(normalize_levels(&[0.95, 0.8]).unwrap(), vec![0.8, 0.95]);
        assert!(normalize_levels(&[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn difference_then_integrate_round_trips(
            values in proptest::collection::vec(-1e4f64..1e4, 14..60),
            lag in 1usize..13,
        ) {
            let ts = TimeSeries::monthly(ym(2001, 5), values.clone()).unwrap();
            let d = ts.difference(lag).unwrap();
            let back = TimeSeries::integrate(&d, lag, &values[..lag]).unwrap();
            prop_assert_eq!(back.start(), ts.start());
            for (a, b) in back.values().iter().zip(&values) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn acf_affine_invariant(
            values in proptest::collection::vec(-100f64..100.0, 20..80),
            a in 0.01f64..50.0,
            b in -1e3f64..1e3,
        ) {
            let spread = values.iter().cloned().fold(f64::MIN, f64::max)
                - values.iter().cloned().fold(f64::MAX, f64::min);
            prop_assume!(spread > 1e-3);
            let r1 = acf(&values, 5).unwrap();
            let shifted: Vec<f64> = values.iter().map(|v| a * v + b).collect();
            let r2 = acf(&shifted, 5).unwrap();
            for (x, y) in r1.iter().zip(&r2) {
                prop_assert!((x - y).abs() < 1e-9);
                prop_assert!(x.abs() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn slice_commutes_with_difference(
            values in proptest::collection::vec(-1e3f64..1e3, 30..60),
            a in 0usize..10,
            len in 3usize..15,
            lag in 1usize..3,
        ) {
            let ts = TimeSeries::monthly(ym(1995, 3), values).unwrap();
            let from = ts.stamp_at(a + lag);
            let to = ts.stamp_at(a + lag + len);
            let lhs = ts.slice(ts.stamp_at(a), to).unwrap().difference(lag).unwrap();
            let rhs = ts.difference(lag).unwrap().slice(from, to).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn subseries_partition_is_exact(
            values in proptest::collection::vec(-1e3f64..1e3, 12..60),
            start_month in 1u32..=12,
        ) {
            let ts = TimeSeries::monthly(ym(2000, start_month), values.clone()).unwrap();
            let subs = seasonal_subseries(&ts).unwrap();
            let mut rebuilt = vec![f64::NAN; values.len()];
            for s in &subs {
                for (stamp, v) in s.stamps.iter().zip(&s.values) {
                    prop_assert_eq!(stamp.month() as usize, s.season);
                    rebuilt[ts.index_of(*stamp).unwrap()] = *v;
                }
            }
            prop_assert_eq!(rebuilt, values);
        }
    }
}
