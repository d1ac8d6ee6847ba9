//! File formats for feature matrices, simulated replications and JSON
//! artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::clustering::FeatureMatrix;
use crate::error::{Error, Result};
use crate::serde_num::cell;
use crate::series::TimeSeries;

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        file: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// Header `label,<feature names>`, one row per series.
pub fn write_features_csv<W: Write>(m: &FeatureMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["label".to_string()];
    header.extend(m.names().iter().cloned());
    w.write_record(&header)?;
    for (label, row) in m.labels().iter().zip(m.rows()) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|&v| cell(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_features(m: &FeatureMatrix, path: &Path) -> Result<()> {
    write_features_csv(m, BufWriter::new(File::create(path)?))
}

pub fn read_features_csv(path: &Path) -> Result<FeatureMatrix> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::Schema {
            file: path.to_path_buf(),
            msg: "expected a label column followed by feature columns".into(),
        });
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row: Vec<f64> = rec
            .iter()
            .skip(1)
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                file: path.to_path_buf(),
                row: i + 2,
                msg: e.to_string(),
            })?;
        labels.push(rec.get(0).unwrap_or("").to_string());
        rows.push(row);
    }
    FeatureMatrix::new(labels, names, rows)
}

/// Long-format replication file: `series_id,label,t,value` with `t` from 1.
pub fn write_replication_csv(series: &[TimeSeries], groups: &[String], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["series_id", "label", "t", "value"])?;
    for (s, g) in series.iter().zip(groups) {
        for (t, v) in s.values().iter().enumerate() {
            w.write_record([s.label(), g.as_str(), &(t + 1).to_string(), &cell(*v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a replication file back into series (in first-appearance order)
/// and their group labels.
pub fn read_replication_csv(path: &Path) -> Result<(Vec<TimeSeries>, Vec<String>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut ids: Vec<String> = Vec::new();
    let mut groups: Vec<String> = Vec::new();
    let mut values: Vec<Vec<(usize, f64)>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let err = |msg: String| Error::Parse {
            file: path.to_path_buf(),
            row: i + 2,
            msg,
        };
        if rec.len() != 4 {
            return Err(err(format!("expected 4 fields, got {}", rec.len())));
        }
        let t: usize = rec[2]
            .parse()
            .map_err(|_| err(format!("bad t `{}`", &rec[2])))?;
        let v: f64 = rec[3]
            .parse()
            .map_err(|_| err(format!("bad value `{}`", &rec[3])))?;
        if ids.last().map(String::as_str) != Some(&rec[0]) {
            if ids.iter().any(|id| id == &rec[0]) {
                return Err(err(format!(
                    "rows of series `{}` are not contiguous",
                    &rec[0]
                )));
            }
            ids.push(rec[0].to_string());
            groups.push(rec[1].to_string());
            values.push(Vec::new());
        }
        values.last_mut().expect("pushed").push((t, v));
    }
    let series = ids
        .into_iter()
        .zip(values)
        .map(|(id, mut v)| {
            v.sort_by_key(|p| p.0);
            TimeSeries::new(id, v.into_iter().map(|p| p.1).collect())
        })
        .collect::<Result<_>>()?;
    Ok((series, groups))
}
