use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ARIMA(p,d,q)(P,D,Q)[m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SarimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub sp: usize,
    pub sd: usize,
    pub sq: usize,
    pub period: usize,
}

impl SarimaOrder {
    pub fn new(
        (p, d, q): (usize, usize, usize),
        (sp, sd, sq): (usize, usize, usize),
        period: usize,
    ) -> Result<Self> {
        let order = Self { p, d, q, sp, sd, sq, period };
        order.validate()?;
        Ok(order)
    }

    pub fn non_seasonal(p: usize, d: usize, q: usize) -> Self {
        Self { p, d, q, sp: 0, sd: 0, sq: 0, period: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::InvalidArgument("period must be >= 1".into()));
        }
        if self.d + self.sd > 3 {
            return Err(Error::InvalidArgument(format!("d + D = {} exceeds 3", self.d + self.sd)));
        }
        if self.period == 1 && (self.sp + self.sd + self.sq) > 0 {
            return Err(Error::InvalidArgument("seasonal orders need period > 1".into()));
        }
        Ok(())
    }

    /// Degree of the expanded AR polynomial, `p + mP`.
    pub fn ar_degree(&self) -> usize {
        self.p + self.period * self.sp
    }

    /// Degree of the expanded MA polynomial, `q + mQ`.
    pub fn ma_degree(&self) -> usize {
        self.q + self.period * self.sq
    }

    /// Observations consumed by differencing.
    pub fn lost_to_differencing(&self) -> usize {
        self.d + self.period * self.sd
    }

    pub fn coefficient_count(&self) -> usize {
        self.p + self.q + self.sp + self.sq
    }

    /// Parses `p,d,q,P,D,Q`.
    pub fn parse_list(text: &str, period: usize) -> Result<Self> {
        let parts: Vec<usize> = text
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse order {text:?}")))?;
        match parts[..] {
            [p, d, q] => Self::new((p, d, q), (0, 0, 0), period),
            [p, d, q, sp, sd, sq] => Self::new((p, d, q), (sp, sd, sq), period),
            _ => Err(Error::InvalidArgument(format!(
                "order {text:?} must have 3 or 6 comma-separated integers"
            ))),
        }
    }
}

impl fmt::Display for SarimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)?;
        if self.period > 1 && (self.sp + self.sd + self.sq) > 0 {
            write!(f, "({},{},{})[{}]", self.sp, self.sd, self.sq, self.period)?;
        }
        Ok(())
    }
}

/// Model coefficients in the `(1 - φ₁B - …)` / `(1 + θ₁B + …)` convention.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SarimaCoefficients {
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub sar: Vec<f64>,
    pub sma: Vec<f64>,
    /// Mean of the differenced series; only estimated when `d + D = 0`.
    pub mean: Option<f64>,
}

impl SarimaCoefficients {
    pub fn zeros(order: &SarimaOrder, with_mean: bool) -> Self {
        Self {
            ar: vec![0.0; order.p],
            ma: vec![0.0; order.q],
            sar: vec![0.0; order.sp],
            sma: vec![0.0; order.sq],
            mean: with_mean.then_some(0.0),
        }
    }

    pub fn check_against(&self, order: &SarimaOrder) -> Result<()> {
        let ok = self.ar.len() == order.p
            && self.ma.len() == order.q
            && self.sar.len() == order.sp
            && self.sma.len() == order.sq;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "coefficient counts ({}, {}, {}, {}) do not match {order}",
                self.ar.len(),
                self.ma.len(),
                self.sar.len(),
                self.sma.len()
            )))
        }
    }

    /// Flattened as `ar, ma, sar, sma, mean`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v: Vec<f64> = Vec::new();
        v.extend(&self.ar);
        v.extend(&self.ma);
        v.extend(&self.sar);
        v.extend(&self.sma);
        v.extend(self.mean);
        v
    }

    pub fn from_slice(order: &SarimaOrder, with_mean: bool, v: &[f64]) -> Self {
        let mut it = v.iter().copied();
        let mut take = |k: usize| (&mut it).take(k).collect::<Vec<_>>();
        let ar = take(order.p);
        let ma = take(order.q);
        let sar = take(order.sp);
        let sma = take(order.sq);
        let mean = if with_mean { it.next() } else { None };
        Self { ar, ma, sar, sma, mean }
    }

    /// Labels matching [`to_vec`](Self::to_vec).
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (prefix, v) in [("ar", &self.ar), ("ma", &self.ma), ("sar", &self.sar), ("sma", &self.sma)] {
            out.extend((1..=v.len()).map(|i| format!("{prefix}{i}")));
        }
        if self.mean.is_some() {
            out.push("mean".into());
        }
        out
    }
}
