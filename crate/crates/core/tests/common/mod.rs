#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use refcast::{MonthStamp, TimeSeries};

pub fn normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// `(1 - φB) w = (1 + θB) e`, after a burn-in of 200.
pub fn arma11(seed: u64, n: usize, phi: f64, theta: f64) -> Vec<f64> {
    let burn = 200;
    let e = normals(seed, n + burn);
    let mut w = vec![0.0; n + burn];
    for t in 1..n + burn {
        w[t] = phi * w[t - 1] + e[t] + theta * e[t - 1];
    }
    w.split_off(burn)
}

/// `(1 - φB)(1 - B^12) y = (1 + ΘB^12) e`, after a burn-in of 240.
pub fn sarima_100_011(seed: u64, n: usize, phi: f64, big_theta: f64) -> Vec<f64> {
    let burn = 240;
    let total = n + burn;
    let e = normals(seed, total);
    let mut w = vec![0.0; total];
    for t in 0..total {
        let ma = if t >= 12 { big_theta * e[t - 12] } else { 0.0 };
        let ar = if t >= 1 { phi * w[t - 1] } else { 0.0 };
        w[t] = e[t] + ma + ar;
    }
    let mut y = vec![0.0; total];
    for t in 0..total {
        y[t] = w[t] + if t >= 12 { y[t - 12] } else { 0.0 };
    }
    y.split_off(burn)
}

pub fn monthly(start: (i32, u32), values: Vec<f64>) -> TimeSeries {
    TimeSeries::monthly(MonthStamp::new(start.0, start.1).unwrap(), values).unwrap()
}

/// A production-like series: level, slow drift, monthly pattern and AR(1) noise.
pub fn production_like(seed: u64, n: usize, level: f64, amplitude: f64, noise: f64) -> Vec<f64> {
    let e = normals(seed, n);
    let mut ar = 0.0;
    (0..n)
        .map(|t| {
            ar = 0.6 * ar + noise * e[t];
            let season = amplitude * (2.0 * std::f64::consts::PI * (t % 12) as f64 / 12.0).sin();
            level + 0.5 * t as f64 + season + ar
        })
        .collect()
}

pub const DISTILLATE: &str = "DFRPPUS";
pub const PROPANE: &str = "PRRPPUS";

/// Writes a two-series MER-style CSV (with annual rows and a trailing
/// not-available value) and returns its path.
pub fn mer_fixture(dir: &Path, months: usize) -> PathBuf {
    let mut body = String::from("MSN,YYYYMM,Value,Column_Order,Description,Unit\n");
    let series = [
        (DISTILLATE, "Distillate Fuel Oil Refinery and Blender Net Production", production_like(1, months, 3000.0, 150.0, 60.0)),
        (PROPANE, "Propane Refinery and Blender Net Production", production_like(2, months, 500.0, 20.0, 8.0)),
    ];
    for (order, (msn, desc, values)) in series.iter().enumerate() {
        let start = MonthStamp::new(2000, 1).unwrap();
        for (i, v) in values.iter().enumerate() {
            let stamp = start.add_months(i as i64);
            writeln!(body, "{msn},{},{v:.3},{},{desc},Thousand Barrels per Day", stamp.yyyymm(), order + 1).unwrap();
            if stamp.month() == 12 {
                writeln!(body, "{msn},{}13,{v:.3},{},{desc},Thousand Barrels per Day", stamp.year(), order + 1).unwrap();
            }
        }
        let next = start.add_months(values.len() as i64);
        writeln!(body, "{msn},{},Not Available,{},{desc},Thousand Barrels per Day", next.yyyymm(), order + 1).unwrap();
    }
    let path = dir.join("mer.csv");
    std::fs::write(&path, body).unwrap();
    path
}
