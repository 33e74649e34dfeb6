//! Run orchestration and output: text reports, forecast tables, plot data.

mod config;
mod model;
mod plots;
mod tables;
mod text;

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::diagnostics::residual_bundle;
use crate::error::{Error, Result};
use crate::ingest::{load_mer_csv, MerSeries};
use crate::sarima::{kpss_level, ndiffs, nsdiffs, seasonal_strength};
use crate::series::{Forecast, TimeSeries};

pub use config::{ModelChoice, OutputFormat, RunConfig, Transform, DEFAULT_HORIZON};
pub use model::{
    fit_arima_model, fit_ets_model, fit_snaive_model, ljung_box_lags, ArimaOrderChoice, FittedModel,
    ModelDiagnostics,
};
pub use plots::{fan_csv, residual_csvs, seasonal_plot_csv, series_csv, subseries_csv};
pub use tables::{emit_table, round6, table_csv, table_json};
pub use text::{accuracy_table, fmt_num, fmt_p_value, fmt_sig, forecast_table, render_report, ReportContext};

/// Everything produced for one model.
#[derive(Debug, Clone)]
pub struct ModelRun {
    pub model: FittedModel,
    pub diagnostics: ModelDiagnostics,
    pub forecast: Option<Forecast>,
    pub report: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: String,
    pub rmse: f64,
    pub mae: f64,
    pub mase: Option<f64>,
}

/// Fits the requested model(s) to an already transformed series.
pub fn fit_models(ts: &TimeSeries, choice: ModelChoice, order: Option<crate::sarima::SarimaOrder>) -> Result<Vec<FittedModel>> {
    let arima_order = order.map_or(ArimaOrderChoice::Auto, ArimaOrderChoice::Fixed);
    match choice {
        ModelChoice::Snaive => Ok(vec![fit_snaive_model(ts)?]),
        ModelChoice::Ets => Ok(vec![fit_ets_model(ts)?]),
        ModelChoice::Arima => Ok(vec![fit_arima_model(ts, arima_order)?]),
        ModelChoice::AutoCompare => {
            let (snaive, (ets, arima)) = rayon::join(
                || fit_snaive_model(ts),
                || rayon::join(|| fit_ets_model(ts), || fit_arima_model(ts, arima_order)),
            );
            Ok(vec![snaive?, ets?, arima?])
        }
    }
}

/// Diagnostics, forecast and report for each fitted model. No I/O.
pub fn analyze(
    models: Vec<FittedModel>,
    config: &RunConfig,
    ctx: &ReportContext<'_>,
) -> Result<Vec<ModelRun>> {
    let levels = config.levels();
    models
        .into_iter()
        .map(|model| {
            let diagnostics = model.diagnose()?;
            let forecast = if config.include_forecast {
                Some(model.forecast(config.horizon, &levels, config.seed)?)
            } else {
                None
            };
            let report = render_report(&model, forecast.as_ref(), &diagnostics, ctx);
            Ok(ModelRun { model, diagnostics, forecast, report })
        })
        .collect()
}

pub fn comparison(runs: &[ModelRun]) -> Vec<ComparisonRow> {
    runs.iter()
        .map(|r| ComparisonRow {
            method: r.model.method(),
            rmse: r.diagnostics.accuracy.rmse,
            mae: r.diagnostics.accuracy.mae,
            mase: r.diagnostics.accuracy.mase,
        })
        .collect()
}

pub fn render_comparison(rows: &[ComparisonRow]) -> String {
    let width = rows.iter().map(|r| r.method.len()).max().unwrap_or(5).max(5);
    let cells: Vec<[String; 3]> = rows
        .iter()
        .map(|r| [fmt_num(r.rmse), fmt_num(r.mae), r.mase.map_or_else(|| "NA".into(), fmt_num)])
        .collect();
    let col = |i: usize, h: &str| cells.iter().map(|c| c[i].len()).chain([h.len()]).max().unwrap_or(0);
    let (w0, w1, w2) = (col(0, "RMSE"), col(1, "MAE"), col(2, "MASE"));
    let mut out = String::from("Training-set accuracy\n");
    out.push_str(&format!("{:width$} {:>w0$} {:>w1$} {:>w2$}\n", "Model", "RMSE", "MAE", "MASE"));
    for (r, c) in rows.iter().zip(&cells) {
        out.push_str(&format!("{:width$} {:>w0$} {:>w1$} {:>w2$}\n", r.method, c[0], c[1], c[2]));
    }
    out
}

/// Descriptive statistics and differencing tests for `inspect`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub observations: usize,
    pub start: String,
    pub end: String,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub kpss: Option<f64>,
    pub seasonal_strength: Option<f64>,
    pub ndiffs: Option<usize>,
    pub nsdiffs: Option<usize>,
}

pub fn summarize(ts: &TimeSeries) -> SeriesSummary {
    let y = ts.values();
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let sd = if y.len() > 1 { (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    SeriesSummary {
        observations: y.len(),
        start: ts.start().to_string(),
        end: ts.end().to_string(),
        mean,
        sd,
        min: y.iter().copied().fold(f64::INFINITY, f64::min),
        max: y.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        kpss: kpss_level(y).ok(),
        seasonal_strength: seasonal_strength(ts).ok(),
        ndiffs: ndiffs(ts).ok(),
        nsdiffs: nsdiffs(ts).ok(),
    }
}

pub fn render_summary(label: &str, unit: &str, s: &SeriesSummary) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "NA".into(), fmt_num);
    let opt_u = |v: Option<usize>| v.map_or_else(|| "NA".into(), |d| d.to_string());
    let mut out = format!("Series: {label}\n");
    if !unit.is_empty() {
        out.push_str(&format!("Unit: {unit}\n"));
    }
    out.push_str(&format!("Span: {} - {} ({} observations)\n", s.start, s.end, s.observations));
    out.push_str(&format!(
        "Mean: {}  SD: {}  Min: {}  Max: {}\n",
        fmt_num(s.mean),
        fmt_num(s.sd),
        fmt_num(s.min),
        fmt_num(s.max)
    ));
    out.push_str(&format!("KPSS level statistic: {}\n", opt(s.kpss)));
    out.push_str(&format!("Seasonal strength: {}\n", opt(s.seasonal_strength)));
    out.push_str(&format!("Suggested differences: d = {}, D = {}\n", opt_u(s.ndiffs), opt_u(s.nsdiffs)));
    out
}

fn write(path: PathBuf, body: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, body)?;
    files.push(path);
    Ok(())
}

/// Raw, differenced, seasonal and subseries plot data for `ts` under `dir`.
pub fn write_series_plots(ts: &TimeSeries, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    write(dir.join("raw.csv"), &series_csv(ts), &mut files)?;
    if ts.len() > 1 {
        write(dir.join("differenced.csv"), &series_csv(&ts.difference(1)?), &mut files)?;
    }
    write(dir.join("seasonal.csv"), &seasonal_plot_csv(ts), &mut files)?;
    if ts.len() >= ts.period() {
        write(dir.join("subseries.csv"), &subseries_csv(ts)?, &mut files)?;
    }
    Ok(files)
}

pub fn load_series(config: &RunConfig) -> Result<MerSeries> {
    let file = File::open(&config.input).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", config.input.display())))
    })?;
    load_mer_csv(BufReader::new(file), &config.msn, config.range)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: MerSeries,
    pub runs: Vec<ModelRun>,
    pub comparison: Option<Vec<ComparisonRow>>,
    /// Files written, in creation order.
    pub files: Vec<PathBuf>,
}

/// Loads, transforms, fits, diagnoses, forecasts and writes every artifact.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let loaded = load_series(config)?;
    let transformed = config.transform.apply(&loaded.series)?;
    let label = config.transform.label(&loaded.msn);
    let ctx = ReportContext { series: &label, transform: config.transform, unit: &loaded.unit };
    let models = fit_models(&transformed, config.model, config.order)?;
    let runs = analyze(models, config, &ctx)?;

    let out = &config.out_dir;
    let plots = out.join("plots");
    fs::create_dir_all(&plots)?;
    let mut files = write_series_plots(&loaded.series, &plots)?;

    for r in &runs {
        let family = r.model.family();
        write(out.join(format!("{family}_report.txt")), &r.report, &mut files)?;
        let mut diag = serde_json::to_string_pretty(&json!({
            "method": r.model.method(),
            "transform": config.transform.to_string(),
            "accuracy": r.diagnostics.accuracy,
            "ljung_box": r.diagnostics.ljung_box,
        }))?;
        diag.push('\n');
        write(out.join(format!("{family}_diagnostics.json")), &diag, &mut files)?;
        if let Some(fc) = &r.forecast {
            for format in &config.formats {
                let path = out.join(format!("{family}_forecast.{format}"));
                emit_table(fc, *format, config.transform, &path)?;
                files.push(path);
            }
            write(plots.join(format!("{family}_fan.csv")), &fan_csv(r.model.training(), fc), &mut files)?;
        }
        if let Ok(bundle) = residual_bundle(&r.model.check_residuals(), r.model.first_residual_stamp()) {
            for (name, body) in residual_csvs(&bundle) {
                write(plots.join(format!("{family}_{name}.csv")), &body, &mut files)?;
            }
        }
    }

    let comparison = (config.model == ModelChoice::AutoCompare).then(|| comparison(&runs));
    if let Some(rows) = &comparison {
        write(out.join("compare.txt"), &render_comparison(rows), &mut files)?;
        let mut csv = String::from("model,rmse,mae,mase\n");
        for r in rows {
            let mase = r.mase.map_or_else(String::new, |v| format!("{v:.6}"));
            csv.push_str(&format!("\"{}\",{:.6},{:.6},{mase}\n", r.method, r.rmse, r.mae));
        }
        write(out.join("compare.csv"), &csv, &mut files)?;
    }

    let manifest_path = out.join("manifest.json");
    let relative: Vec<String> = files
        .iter()
        .chain([&manifest_path])
        .map(|p| p.strip_prefix(out).unwrap_or(p).display().to_string())
        .collect();
    let mut manifest = serde_json::to_string_pretty(&json!({
        "msn": loaded.msn,
        "description": loaded.description,
        "unit": loaded.unit,
        "from": transformed.start().to_string(),
        "to": transformed.end().to_string(),
        "transform": config.transform.to_string(),
        "model": config.model.to_string(),
        "order": config.order.map(|o| o.to_string()),
        "horizon": config.horizon,
        "levels": config.levels(),
        "seed": config.seed,
        "methods": runs.iter().map(|r| r.model.method()).collect::<Vec<_>>(),
        "files": relative,
    }))?;
    manifest.push('\n');
    write(manifest_path, &manifest, &mut files)?;

    Ok(RunOutcome { series: loaded, runs, comparison, files })
}
