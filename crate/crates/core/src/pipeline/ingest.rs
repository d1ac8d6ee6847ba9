//! Per-stock CSV ingestion.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::{scale_to_initial, TimeSeries};

/// Files with fewer rows than this are skipped.
pub const MIN_ROWS: usize = 8;

/// One parsed row of a stock file.
#[derive(Debug, Clone, PartialEq)]
pub struct StockRecord {
    pub date: NaiveDate,
    pub symbol: String,
    pub vwap: f64,
}

/// Parses `YYYY-MM-DD` or `DD-MM-YYYY` (also with `/` separators).
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    ["%Y-%m-%d", "%d-%m-%Y", "%Y/%m/%d", "%d/%m/%Y"]
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(s, f).ok())
}

fn column(headers: &csv::StringRecord, name: &str, file: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Schema {
            file: file.to_path_buf(),
            msg: format!("missing required column `{name}`"),
        })
}

/// Reads one stock file, sorted by date. Row numbers in errors count the
/// header as row 1.
pub fn read_stock_file(path: &Path) -> Result<Vec<StockRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let (di, si, vi) = (
        column(&headers, "Date", path)?,
        column(&headers, "Symbol", path)?,
        column(&headers, "VWAP", path)?,
    );
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let parse_err = |msg: String| Error::Parse {
            file: path.to_path_buf(),
            row: line,
            msg,
        };
        let field = |j: usize| row.get(j).unwrap_or("").trim();
        let date = parse_date(field(di))
            .ok_or_else(|| parse_err(format!("unparseable date `{}`", field(di))))?;
        let vwap: f64 = field(vi)
            .parse()
            .map_err(|_| parse_err(format!("unparseable VWAP `{}`", field(vi))))?;
        if !(vwap.is_finite() && vwap > 0.0) {
            return Err(parse_err(format!("VWAP must be positive, got {vwap}")));
        }
        records.push(StockRecord {
            date,
            symbol: field(si).to_string(),
            vwap,
        });
    }
    records.sort_by_key(|r| r.date);
    if let Some(w) = records.windows(2).find(|w| w[0].date == w[1].date) {
        return Err(Error::DuplicateDate {
            file: path.to_path_buf(),
            date: w[0].date.to_string(),
        });
    }
    Ok(records)
}

/// Loads every `*.csv` in `dir`, keyed by the symbol on the latest row.
///
/// Each series is the last `window` VWAP values scaled by the first of them.
/// Shorter files are kept whole with a warning; files with fewer than
/// [`MIN_ROWS`] rows are skipped.
pub fn ingest(dir: &Path, window: usize) -> Result<BTreeMap<String, TimeSeries>> {
    if window < MIN_ROWS {
        return Err(Error::Config(format!(
            "window must be at least {MIN_ROWS}, got {window}"
        )));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    files.sort();
    let mut out = BTreeMap::new();
    for path in files {
        let records = read_stock_file(&path)?;
        if records.len() < MIN_ROWS {
            log::warn!("{}: only {} rows, skipped", path.display(), records.len());
            continue;
        }
        if records.len() < window {
            log::warn!(
                "{}: {} rows, shorter than the {window}-row window",
                path.display(),
                records.len()
            );
        }
        let tail = &records[records.len().saturating_sub(window)..];
        let symbol = tail.last().expect("non-empty").symbol.clone();
        if symbol.is_empty() {
            return Err(Error::Schema {
                file: path.clone(),
                msg: "empty Symbol on the latest row".into(),
            });
        }
        let raw = TimeSeries::new(symbol.clone(), tail.iter().map(|r| r.vwap).collect())?;
        let scaled = scale_to_initial(&raw)?;
        if out.insert(symbol.clone(), scaled).is_some() {
            return Err(Error::Config(format!(
                "symbol `{symbol}` appears in more than one file"
            )));
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!(
            "no usable stock files in {}",
            dir.display()
        )));
    }
    Ok(out)
}
