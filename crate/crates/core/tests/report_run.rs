mod common;

use std::fs;
use std::path::Path;

use refcast::ets::{fit_ets, EtsSpec, ErrorType, SeasonalType};
use refcast::report::{
    self, fit_snaive_model, fmt_num, render_report, FittedModel, ModelChoice, OutputFormat, ReportContext, RunConfig,
    Transform,
};
use refcast::sarima::SarimaOrder;
use refcast::Error;

use common::{mer_fixture, DISTILLATE, PROPANE};

fn config(input: &Path, msn: &str, out: &Path, model: ModelChoice) -> RunConfig {
    let mut c = RunConfig::new(input, msn, out);
    c.model = model;
    c
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn snaive_on_differences_writes_bracketing_bands() {
    let dir = tempfile::tempdir().unwrap();
    let input = mer_fixture(dir.path(), 96);
    let out = dir.path().join("out");
    let mut c = config(&input, DISTILLATE, &out, ModelChoice::Snaive);
    c.transform = Transform::Diff;
    let outcome = report::run(&c).unwrap();
    assert_eq!(outcome.runs.len(), 1);

    let rows = read_csv(&out.join("snaive_forecast.csv"));
    assert_eq!(rows.len(), 24);
    assert_eq!(rows[0][0], "2008-01");
    for row in &rows {
        let v: Vec<f64> = row[1..].iter().map(|s| s.parse().unwrap()).collect();
        let (point, lo80, hi80, lo95, hi95) = (v[0], v[1], v[2], v[3], v[4]);
        assert!(lo95 <= lo80 && lo80 <= point && point <= hi80 && hi80 <= hi95, "{row:?}");
    }
    let report = fs::read_to_string(out.join("snaive_report.txt")).unwrap();
    assert!(report.contains("Call: snaive(y = diff(DFRPPUS))"));
    assert!(report.contains("Transform: diff"));
    assert!(report.contains("Jan 2008"));
}

#[test]
fn every_listed_file_exists_and_manifest_is_complete() {
    let dir = tempfile::tempdir().unwrap();
    let input = mer_fixture(dir.path(), 120);
    let out = dir.path().join("out");
    let mut c = config(&input, PROPANE, &out, ModelChoice::Arima);
    c.order = Some(SarimaOrder::new((1, 1, 1), (0, 1, 1), 12).unwrap());
    c.formats = vec![OutputFormat::Csv, OutputFormat::Json];
    let outcome = report::run(&c).unwrap();
    for f in &outcome.files {
        assert!(f.exists(), "{}", f.display());
    }
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), outcome.files.len());
    assert_eq!(manifest["order"], "ARIMA(1,1,1)(0,1,1)[12]");
    assert_eq!(manifest["msn"], PROPANE);

    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("arima_forecast.json")).unwrap()).unwrap();
    let rows = read_csv(&out.join("arima_forecast.csv"));
    assert_eq!(json["points"].as_array().unwrap().len(), rows.len());
    for (h, row) in rows.iter().enumerate() {
        assert_eq!(row[1].parse::<f64>().unwrap(), json["points"][h].as_f64().unwrap());
    }
    let report = fs::read_to_string(out.join("arima_report.txt")).unwrap();
    assert!(report.contains("ARIMA(1,1,1)(0,1,1)[12]"));
    assert!(report.contains("s.e."));
    assert!(report.contains("Ljung-Box test"));
    for plot in ["raw", "differenced", "seasonal", "subseries", "arima_fan", "arima_residuals", "arima_residual_acf", "arima_residual_histogram"] {
        assert!(out.join("plots").join(format!("{plot}.csv")).exists(), "{plot}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = mer_fixture(dir.path(), 108);
    let mut outputs = Vec::new();
    for name in ["first", "second"] {
        let out = dir.path().join(name);
        let mut c = config(&input, DISTILLATE, &out, ModelChoice::Ets);
        c.seed = 99;
        c.formats = vec![OutputFormat::Csv, OutputFormat::Json];
        let outcome = report::run(&c).unwrap();
        let files: Vec<(String, Vec<u8>)> = outcome
            .files
            .iter()
            .map(|p| (p.strip_prefix(&out).unwrap().display().to_string(), fs::read(p).unwrap()))
            .collect();
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn comparison_lists_three_models() {
    let dir = tempfile::tempdir().unwrap();
    let input = mer_fixture(dir.path(), 120);
    let out = dir.path().join("out");
    let outcome = report::run(&config(&input, DISTILLATE, &out, ModelChoice::AutoCompare)).unwrap();
    let rows = outcome.comparison.unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].method, "Seasonal naive method");
    assert_eq!(rows[0].mase, Some(1.0));
    assert!(rows[1].method.starts_with("ETS("));
    assert!(rows[2].method.starts_with("ARIMA("));
    let text = fs::read_to_string(out.join("compare.txt")).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(read_csv(&out.join("compare.csv")).len(), 3);
}

#[test]
fn residual_sd_line_uses_seven_significant_digits() {
    let ts = common::monthly((2010, 1), common::production_like(5, 60, 100.0, 10.0, 3.0));
    let FittedModel::Snaive(mut fit) = fit_snaive_model(&ts).unwrap() else { unreachable!() };
    fit.residual_sd = 194.653_812;
    let model = FittedModel::Snaive(fit);
    let diagnostics = model.diagnose().unwrap();
    let ctx = ReportContext { series: "DY", transform: Transform::Diff, unit: "" };
    let text = render_report(&model, None, &diagnostics, &ctx);
    assert!(text.lines().any(|l| l == "Residual sd: 194.6538"));
    assert!(!text.contains("Forecasts:"));
}

#[test]
fn ets_report_lists_seasonal_states_by_lag() {
    let ts = common::monthly((2000, 1), common::production_like(8, 96, 300.0, 25.0, 4.0));
    let spec = EtsSpec::new(ErrorType::Additive, SeasonalType::Additive, 12).unwrap();
    let fit = fit_ets(&ts, &spec).unwrap();
    let s = fit.initial_states.seasonal.clone();
    let model = FittedModel::Ets(Box::new(fit));
    let text = render_report(&model, None, &model.diagnose().unwrap(), &ReportContext { series: "Y", transform: Transform::None, unit: "" });
    let first = text.lines().find(|l| l.trim_start().starts_with("s = ")).unwrap();
    let expected: Vec<String> = s[..4].iter().map(|v| fmt_num(*v)).collect();
    assert_eq!(first.trim_start().trim_start_matches("s = "), expected.join(" "));
    let lines: Vec<&str> = text.lines().collect();
    let at = lines.iter().position(|l| *l == first).unwrap();
    let rest: Vec<String> = s[4..8].iter().map(|v| fmt_num(*v)).collect();
    assert_eq!(lines[at + 1].trim(), rest.join(" "));
}

#[test]
fn data_errors_surface_with_their_class() {
    let dir = tempfile::tempdir().unwrap();
    let input = mer_fixture(dir.path(), 60);
    let out = dir.path().join("out");
    let err = report::run(&config(&input, "NOPE", &out, ModelChoice::Snaive)).unwrap_err();
    assert!(matches!(&err, Error::NotFound { .. }), "{err}");
    assert!(err.to_string().contains(DISTILLATE));
    assert_eq!(err.class(), refcast::ErrorClass::Data);

    let missing = report::run(&config(&dir.path().join("absent.csv"), DISTILLATE, &out, ModelChoice::Snaive)).unwrap_err();
    assert!(missing.to_string().contains("absent.csv"));

    let mut c = config(&input, DISTILLATE, &out, ModelChoice::Snaive);
    c.horizon = 0;
    assert_eq!(report::run(&c).unwrap_err().class(), refcast::ErrorClass::Usage);
}
