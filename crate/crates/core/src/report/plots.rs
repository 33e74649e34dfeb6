//! Columnar plot data: one CSV per figure, no rendering.

use crate::diagnostics::ResidualBundle;
use crate::error::Result;
use crate::series::{seasonal_subseries, Forecast, TimeSeries};

use super::tables::table_csv;

/// `month,value`.
pub fn series_csv(ts: &TimeSeries) -> String {
    let mut out = String::from("month,value\n");
    for (stamp, v) in ts.iter() {
        out.push_str(&format!("{stamp},{v}\n"));
    }
    out
}

/// `year,month,value`: one line per year when plotted by month.
pub fn seasonal_plot_csv(ts: &TimeSeries) -> String {
    let mut out = String::from("year,month,value\n");
    for (stamp, v) in ts.iter() {
        out.push_str(&format!("{},{},{v}\n", stamp.year(), stamp.month()));
    }
    out
}

/// `season,month,value,season_mean`, grouped by season.
pub fn subseries_csv(ts: &TimeSeries) -> Result<String> {
    let mut out = String::from("season,month,value,season_mean\n");
    for group in seasonal_subseries(ts)? {
        for (stamp, v) in group.stamps.iter().zip(&group.values) {
            out.push_str(&format!("{},{stamp},{v},{}\n", group.season, group.mean));
        }
    }
    Ok(out)
}

/// Residual time plot, ACF with its band, and histogram.
pub fn residual_csvs(bundle: &ResidualBundle) -> [(&'static str, String); 3] {
    let mut series = String::from("month,residual\n");
    for (s, r) in bundle.stamps.iter().zip(&bundle.residuals) {
        series.push_str(&format!("{s},{r}\n"));
    }
    let mut acf = String::from("lag,acf,band_lower,band_upper\n");
    for (k, r) in bundle.acf.iter().enumerate() {
        acf.push_str(&format!("{},{r},{},{}\n", k + 1, -bundle.acf_band, bundle.acf_band));
    }
    let mut hist = String::from("lower,upper,count\n");
    let h = &bundle.histogram;
    for (i, c) in h.counts.iter().enumerate() {
        hist.push_str(&format!("{},{},{c}\n", h.edges[i], h.edges[i + 1]));
    }
    [("residuals", series), ("residual_acf", acf), ("residual_histogram", hist)]
}

/// `month,actual,point,lo..,hi..`: history rows carry only `actual`.
pub fn fan_csv(history: &TimeSeries, fc: &Forecast) -> String {
    let table = table_csv(fc);
    let mut lines = table.lines();
    let header = lines.next().unwrap_or("month,point");
    let extra = header.split(',').count() - 1;
    let mut out = format!("month,actual,{}\n", &header["month,".len()..]);
    for (stamp, v) in history.iter() {
        out.push_str(&format!("{stamp},{v}{}\n", ",".repeat(extra)));
    }
    for line in lines {
        let (month, rest) = line.split_once(',').unwrap_or((line, ""));
        out.push_str(&format!("{month},,{rest}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::MonthStamp;

    fn ts() -> TimeSeries {
        TimeSeries::monthly(MonthStamp::new(2021, 11).unwrap(), (0..26).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn shapes() {
        let s = ts();
        assert_eq!(series_csv(&s).lines().count(), 27);
        assert!(seasonal_plot_csv(&s).lines().nth(1).unwrap().starts_with("2021,11,0"));
        let sub = subseries_csv(&s).unwrap();
        assert_eq!(sub.lines().count(), 27);
        assert!(sub.lines().nth(1).unwrap().starts_with("1,2022-01,2,"));
    }

    #[test]
    fn fan_rows() {
        let s = ts();
        let fc = Forecast::gaussian(s.end(), vec![1.0, 2.0], &[1.0, 1.0], &[], "m").unwrap();
        let fan = fan_csv(&s, &fc);
        let lines: Vec<&str> = fan.lines().collect();
        assert_eq!(lines[0], "month,actual,point,lo80,hi80,lo95,hi95");
        assert_eq!(lines[1], "2021-11,0,,,,,");
        assert!(lines[27].starts_with("2024-01,,1.000000,"));
        assert_eq!(lines.len(), 29);
    }
}
