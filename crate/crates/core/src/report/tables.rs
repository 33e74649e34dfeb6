use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::Result;
use crate::series::Forecast;

use super::config::{OutputFormat, Transform};
use super::text::fmt_sig;

/// Rounds to six decimal places.
pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn level_key(level: f64) -> String {
    fmt_sig(level * 100.0, 6)
}

/// `month,point,lo80,hi80,lo95,hi95`, one row per horizon, six decimals.
pub fn table_csv(fc: &Forecast) -> String {
    let mut out = String::from("month,point");
    for pi in &fc.intervals {
        let k = level_key(pi.level);
        out.push_str(&format!(",lo{k},hi{k}"));
    }
    out.push('\n');
    for h in 0..fc.horizon() {
        out.push_str(&format!("{},{:.6}", fc.stamp(h + 1), fc.points[h]));
        for pi in &fc.intervals {
            out.push_str(&format!(",{:.6},{:.6}", pi.lower[h], pi.upper[h]));
        }
        out.push('\n');
    }
    out
}

/// The forecast as JSON with every number rounded to six decimals.
pub fn table_json(fc: &Forecast, transform: Transform) -> Value {
    let round = |v: &[f64]| v.iter().map(|x| round6(*x)).collect::<Vec<_>>();
    json!({
        "method": fc.method,
        "transform": transform.to_string(),
        "origin": fc.origin.to_string(),
        "horizon": fc.horizon(),
        "months": (1..=fc.horizon()).map(|h| fc.stamp(h).to_string()).collect::<Vec<_>>(),
        "points": round(&fc.points),
        "intervals": fc.intervals.iter().map(|pi| json!({
            "level": pi.level,
            "lower": round(&pi.lower),
            "upper": round(&pi.upper),
        })).collect::<Vec<_>>(),
    })
}

/// Writes the forecast table to `path` in the requested format.
pub fn emit_table(fc: &Forecast, format: OutputFormat, transform: Transform, path: &Path) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => table_csv(fc),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&table_json(fc, transform))?;
            s.push('\n');
            s
        }
    };
    fs::write(path, body)?;
    Ok(())
}
