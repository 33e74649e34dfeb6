use std::fmt::Write as _;

use crate::diagnostics::{AccuracyMeasures, LjungBoxResult};
use crate::series::Forecast;

use super::config::Transform;
use super::model::{FittedModel, ModelDiagnostics};

pub const REPORT_DIGITS: usize = 7;

/// `x` rounded to `digits` significant digits, trailing zeros removed.
/// Scientific notation (`1.5e-09`) is used below 1e-4 and from 1e15 up.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf".into() } else { "-Inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&exponent) {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exp) = s.split_once('e').expect("exponent present");
        let exp: i32 = exp.parse().expect("integer exponent");
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let s = trim_zeros(&format!("{x:.decimals$}"));
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn fmt_num(x: f64) -> String {
    fmt_sig(x, REPORT_DIGITS)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), fmt_num)
}

/// `p-value = 2.054e-09`, or `p-value < 2.2e-16` below machine precision.
pub fn fmt_p_value(p: f64) -> String {
    if p < 2.2e-16 {
        "p-value < 2.2e-16".into()
    } else {
        format!("p-value = {}", fmt_sig(p, 4))
    }
}

/// Right-aligned table with a left-aligned row-label column.
fn table(header: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = header
        .iter()
        .enumerate()
        .map(|(j, h)| rows.iter().map(|(_, r)| r[j].chars().count()).chain([h.chars().count()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:label_width$}", "");
    for (h, w) in header.iter().zip(&widths) {
        let _ = write!(out, " {h:>w$}");
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{label:label_width$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(out, " {c:>w$}");
        }
        out.push('\n');
    }
    out
}

pub fn accuracy_table(label: &str, a: &AccuracyMeasures) -> String {
    let header: Vec<String> = ["ME", "RMSE", "MAE", "MPE", "MAPE", "MASE", "ACF1"].map(String::from).to_vec();
    let cells = vec![
        fmt_num(a.me),
        fmt_num(a.rmse),
        fmt_num(a.mae),
        fmt_num(a.mpe),
        fmt_num(a.mape),
        fmt_opt(a.mase),
        fmt_opt(a.acf1),
    ];
    table(&header, &[(label.to_string(), cells)])
}

fn level_pct(level: f64) -> String {
    fmt_sig(level * 100.0, 6)
}

pub fn forecast_table(fc: &Forecast) -> String {
    let mut header = vec!["Point Forecast".to_string()];
    for pi in &fc.intervals {
        header.push(format!("Lo {}", level_pct(pi.level)));
        header.push(format!("Hi {}", level_pct(pi.level)));
    }
    let rows: Vec<(String, Vec<String>)> = (0..fc.horizon())
        .map(|h| {
            let mut cells = vec![fmt_num(fc.points[h])];
            for pi in &fc.intervals {
                cells.push(fmt_num(pi.lower[h]));
                cells.push(fmt_num(pi.upper[h]));
            }
            (fc.stamp(h + 1).label(), cells)
        })
        .collect();
    table(&header, &rows)
}

pub fn ljung_box_text(lb: &LjungBoxResult) -> String {
    format!(
        "Q* = {}, df = {}, {}\nModel df: {}.   Total lags used: {}\n",
        fmt_num(lb.q_star),
        lb.df,
        fmt_p_value(lb.p_value),
        lb.model_df,
        lb.lags_used
    )
}

fn model_information(model: &FittedModel, series: &str) -> String {
    let mut out = String::new();
    match model {
        FittedModel::Snaive(f) => {
            let _ = writeln!(out, "Call: snaive(y = {series})\n");
            let _ = writeln!(out, "Residual sd: {}", fmt_num(f.residual_sd));
        }
        FittedModel::Ets(f) => {
            let _ = writeln!(out, "{}\n", f.spec);
            let _ = writeln!(out, "Call: ets(y = {series})\n");
            let _ = writeln!(out, "  Smoothing parameters:");
            let _ = writeln!(out, "    alpha = {}", fmt_num(f.params.alpha));
            if f.spec.is_seasonal() {
                let _ = writeln!(out, "    gamma = {}", fmt_num(f.params.gamma));
            }
            let _ = writeln!(out, "\n  Initial states:");
            let _ = writeln!(out, "    l = {}", fmt_num(f.initial_states.level));
            for (i, chunk) in f.initial_states.seasonal.chunks(4).enumerate() {
                let values: Vec<String> = chunk.iter().map(|v| fmt_num(*v)).collect();
                let lead = if i == 0 { "    s = " } else { "        " };
                let _ = writeln!(out, "{lead}{}", values.join(" "));
            }
            let _ = writeln!(out, "\n  sigma:  {}\n", fmt_num(f.sigma));
            let header = ["AIC", "AICc", "BIC"].map(String::from).to_vec();
            out.push_str(&table(&header, &[(String::new(), vec![fmt_num(f.aic), fmt_num(f.aicc), fmt_num(f.bic)])]));
        }
        FittedModel::Arima(f) => {
            let _ = writeln!(out, "Series: {series}");
            let _ = writeln!(out, "{}\n", f.label());
            let names = f.coefficients.names();
            if !names.is_empty() {
                let _ = writeln!(out, "Coefficients:");
                let mut rows = vec![(String::new(), f.coefficients.to_vec().iter().map(|v| fmt_num(*v)).collect())];
                let se_cells = match &f.standard_errors {
                    Some(se) => se.iter().map(|v| fmt_num(*v)).collect(),
                    None => vec!["NA".to_string(); names.len()],
                };
                rows.push(("s.e.".to_string(), se_cells));
                out.push_str(&table(&names, &rows));
                out.push('\n');
            }
            let _ = writeln!(out, "sigma^2 = {}:  log likelihood = {}", fmt_num(f.sigma2), fmt_num(f.loglik));
            let _ = writeln!(out, "AIC={}   AICc={}   BIC={}", fmt_num(f.aic), fmt_num(f.aicc), fmt_num(f.bic));
            if !f.converged {
                let _ = writeln!(out, "Warning: optimizer stopped at its iteration limit");
            }
        }
    }
    out
}

/// Labels describing the data a model was fitted to.
#[derive(Debug, Clone, Copy)]
pub struct ReportContext<'a> {
    /// Name of the fitted series, e.g. `diff(DFR)`.
    pub series: &'a str,
    pub transform: Transform,
    pub unit: &'a str,
}

/// Plain-text report with sections Forecast method, Model information,
/// Error measures, Residual diagnostics and Forecasts.
pub fn render_report(
    model: &FittedModel,
    forecast: Option<&Forecast>,
    diagnostics: &ModelDiagnostics,
    ctx: &ReportContext<'_>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Forecast method: {}\n", model.method());
    let _ = writeln!(out, "Model information:");
    let _ = writeln!(out, "Transform: {}", ctx.transform);
    if !ctx.unit.is_empty() {
        let _ = writeln!(out, "Unit: {}", ctx.unit);
    }
    let training = model.training();
    let _ = writeln!(
        out,
        "Training sample: {} - {} ({} observations)\n",
        training.start().label(),
        training.end().label(),
        training.len()
    );
    out.push_str(&model_information(model, ctx.series));
    let _ = writeln!(out, "\nError measures:");
    out.push_str(&accuracy_table("Training set", &diagnostics.accuracy));
    if diagnostics.accuracy.skipped_zero_actuals > 0 {
        let _ = writeln!(
            out,
            "({} zero actuals excluded from MPE and MAPE)",
            diagnostics.accuracy.skipped_zero_actuals
        );
    }
    let _ = writeln!(out, "\nResidual diagnostics:");
    match &diagnostics.ljung_box {
        Some(lb) => {
            let _ = writeln!(out, "Ljung-Box test");
            out.push_str(&ljung_box_text(lb));
        }
        None => {
            let _ = writeln!(out, "Ljung-Box test not available for these residuals");
        }
    }
    if let Some(fc) = forecast {
        let _ = writeln!(out, "\nForecasts:");
        out.push_str(&forecast_table(fc));
    }
    out
}
