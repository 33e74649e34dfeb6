//! Reader for EIA Monthly Energy Review CSV exports.
//!
//! Expected columns (any order, case-insensitive, extras ignored): `MSN`,
//! `YYYYMM`, `Value`, and optionally `Description` and `Unit`. Month `13`
//! rows are annual aggregates and are skipped.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{MonthStamp, TimeSeries};

const NOT_AVAILABLE: [&str; 3] = ["not available", "na", ""];

/// One data row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MerRecord {
    pub msn: String,
    pub yyyymm: i64,
    /// `None` for the not-available markers.
    pub value: Option<f64>,
    pub description: String,
    pub unit: String,
}

impl MerRecord {
    pub fn is_annual(&self) -> bool {
        self.yyyymm % 100 == 13
    }

    pub fn stamp(&self) -> Option<MonthStamp> {
        if self.is_annual() {
            None
        } else {
            MonthStamp::from_yyyymm(self.yyyymm).ok()
        }
    }
}

/// Inclusive date window; either end may be open.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DateRange {
    pub from: Option<MonthStamp>,
    pub to: Option<MonthStamp>,
}

impl DateRange {
    pub fn new(from: Option<MonthStamp>, to: Option<MonthStamp>) -> Result<Self> {
        if let (Some(f), Some(t)) = (from, to) {
            if f > t {
                return Err(Error::Range(format!("from {f} is after to {t}")));
            }
        }
        Ok(Self { from, to })
    }

    pub fn contains(&self, stamp: MonthStamp) -> bool {
        self.from.is_none_or(|f| stamp >= f) && self.to.is_none_or(|t| stamp <= t)
    }
}

/// A loaded series with the metadata carried by the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MerSeries {
    pub msn: String,
    pub description: String,
    pub unit: String,
    pub series: TimeSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub msn: String,
    pub description: String,
    pub unit: String,
    /// Earliest and latest monthly observation with a value.
    pub first: Option<MonthStamp>,
    pub last: Option<MonthStamp>,
    pub observations: usize,
}

struct Columns {
    msn: usize,
    yyyymm: usize,
    value: usize,
    description: Option<usize>,
    unit: Option<usize>,
}

impl Columns {
    fn locate(headers: &csv::StringRecord) -> Result<Self> {
        let find = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let required = |name: &str| {
            find(name).ok_or_else(|| Error::Parse { row: 1, message: format!("header has no {name} column") })
        };
        Ok(Self {
            msn: required("MSN")?,
            yyyymm: required("YYYYMM")?,
            value: required("Value")?,
            description: find("Description"),
            unit: find("Unit"),
        })
    }
}

fn parse_record(cols: &Columns, rec: &csv::StringRecord, row: usize) -> Result<MerRecord> {
    let field = |i: usize| rec.get(i).unwrap_or("").trim();
    let parse_err = |message: String| Error::Parse { row, message };

    let raw_date = field(cols.yyyymm);
    let yyyymm: i64 = raw_date
        .parse()
        .ok()
        .filter(|_| raw_date.len() == 6)
        .ok_or_else(|| parse_err(format!("YYYYMM {raw_date:?} is not a 6-digit integer")))?;
    let month = yyyymm % 100;
    if !(1..=13).contains(&month) {
        return Err(parse_err(format!("YYYYMM {yyyymm} has month {month}")));
    }

    let raw_value = field(cols.value);
    let value = if NOT_AVAILABLE.iter().any(|m| raw_value.eq_ignore_ascii_case(m)) {
        None
    } else {
        let v: f64 = raw_value
            .parse()
            .map_err(|_| parse_err(format!("value {raw_value:?} is not a number")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("value {raw_value:?} is not finite")));
        }
        Some(v)
    };

    Ok(MerRecord {
        msn: field(cols.msn).to_string(),
        yyyymm,
        value,
        description: cols.description.map(|i| field(i).to_string()).unwrap_or_default(),
        unit: cols.unit.map(|i| field(i).to_string()).unwrap_or_default(),
    })
}

/// Parses every row. Row numbers in errors count the header as row 1.
pub fn read_records<R: Read>(source: R) -> Result<Vec<MerRecord>> {
    Ok(read_rows(source)?.into_iter().map(|(_, r)| r).collect())
}

fn read_rows<R: Read>(source: R) -> Result<Vec<(usize, MerRecord)>> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { row: 1, message: format!("unreadable header: {e}") })?
        .clone();
    let cols = Columns::locate(&headers)?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse { row, message: e.to_string() })?;
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        out.push((row, parse_record(&cols, &rec, row)?));
    }
    Ok(out)
}

/// One entry per distinct MSN, in order of first appearance.
pub fn list_series<R: Read>(source: R) -> Result<Vec<CatalogEntry>> {
    let records = read_records(source)?;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut catalog: Vec<CatalogEntry> = Vec::new();
    for r in records {
        let slot = *index.entry(r.msn.clone()).or_insert_with(|| {
            catalog.push(CatalogEntry {
                msn: r.msn.clone(),
                description: r.description.clone(),
                unit: r.unit.clone(),
                first: None,
                last: None,
                observations: 0,
            });
            catalog.len() - 1
        });
        let entry = &mut catalog[slot];
        if let (Some(stamp), Some(_)) = (r.stamp(), r.value) {
            entry.first = Some(entry.first.map_or(stamp, |f| f.min(stamp)));
            entry.last = Some(entry.last.map_or(stamp, |l| l.max(stamp)));
            entry.observations += 1;
        }
    }
    Ok(catalog)
}

/// Loads one series: monthly rows for `msn` with a value inside `range`,
/// sorted by month and required to be contiguous.
pub fn load_mer_csv<R: Read>(source: R, msn: &str, range: DateRange) -> Result<MerSeries> {
    let records = read_rows(source)?;
    let mut available: Vec<String> = Vec::new();
    let mut matched = false;
    let mut description = String::new();
    let mut unit = String::new();
    let mut points: Vec<(MonthStamp, f64, usize)> = Vec::new();
    for (row, r) in records {
        if r.msn != msn {
            if !available.contains(&r.msn) {
                available.push(r.msn);
            }
            continue;
        }
        if !matched {
            matched = true;
            description = r.description.clone();
            unit = r.unit.clone();
        }
        if let (Some(stamp), Some(v)) = (r.stamp(), r.value) {
            if range.contains(stamp) {
                points.push((stamp, v, row));
            }
        }
    }
    if !matched {
        available.sort();
        return Err(Error::NotFound { msn: msn.to_string(), available });
    }
    points.sort_by_key(|(s, _, row)| (*s, *row));
    for pair in points.windows(2) {
        let (a, b) = (pair[0].0, pair[1].0);
        if a == b {
            return Err(Error::Parse { row: pair[1].2, message: format!("duplicate month {a} for {msn}") });
        }
        if a.add_months(1) != b {
            return Err(Error::Discontinuity { after: a, next: b });
        }
    }
    let Some(&(start, _, _)) = points.first() else {
        return Err(Error::Range(format!("no observations for {msn} in the requested range")));
    };
    let series = TimeSeries::monthly(start, points.into_iter().map(|(_, v, _)| v).collect())?;
    Ok(MerSeries { msn: msn.to_string(), description, unit, series })
}

/// Writes a series as MER-shaped rows (`MSN,YYYYMM,Value,Description,Unit`).
pub fn write_mer_csv<W: Write>(sink: W, series: &MerSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["MSN", "YYYYMM", "Value", "Description", "Unit"])?;
    for (stamp, v) in series.series.iter() {
        w.write_record([
            series.msn.as_str(),
            &stamp.yyyymm().to_string(),
            &v.to_string(),
            series.description.as_str(),
            series.unit.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
