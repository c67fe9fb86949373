//! CSV, histogram and metadata writers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::{Histogram, SweepResult, SweepRow};
use crate::error::{Error, Result};

pub const SWEEP_COLUMNS: [&str; 13] = [
    "L_m",
    "detector",
    "sigma1_sq",
    "regime",
    "mean_T",
    "mean_sqrtT",
    "var_sqrtT",
    "P_interrupt",
    "eps_theta",
    "I_AB",
    "chi_BE",
    "K",
    "K_atm",
];

/// 17 significant digits: parses back to the identical f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn sweep_record(row: &SweepRow, rate_multiplier: Option<f64>) -> Vec<String> {
    let ch = row.channel.as_ref();
    let kr = row.key_rate.as_ref();
    let mut rec = vec![
        fmt_f64(row.distance),
        row.detector.as_str().to_string(),
        opt(ch.map(|c| c.rytov)),
        ch.map(|c| c.regime.as_str().to_string()).unwrap_or_default(),
        opt(ch.map(|c| c.stats.mean_t)),
        opt(ch.map(|c| c.stats.mean_sqrt_t)),
        opt(ch.map(|c| c.stats.var_sqrt_t)),
        opt(ch.map(|c| c.interruption.probability)),
        opt(ch.map(|c| c.phase_noise.excess_noise)),
        opt(kr.map(|k| k.i_ab)),
        opt(kr.map(|k| k.chi_be)),
        opt(kr.map(|k| k.k)),
        opt(kr.map(|k| k.k_atm)),
    ];
    if let Some(m) = rate_multiplier {
        rec.push(opt(kr.map(|k| k.k_atm * m)));
    }
    rec.push(row.error.clone().unwrap_or_default());
    rec
}

pub fn write_sweep_csv(path: &Path, sweep: &SweepResult, rate_multiplier: Option<f64>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    let mut header: Vec<&str> = SWEEP_COLUMNS.to_vec();
    if rate_multiplier.is_some() {
        header.push("K_atm_rate");
    }
    header.push("error");
    w.write_record(&header)?;
    for row in &sweep.rows {
        w.write_record(sweep_record(row, rate_multiplier))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_histogram_csv(path: &Path, hist: &Histogram) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    w.write_record(["bin_left", "bin_right", "density"])?;
    for (i, d) in hist.densities.iter().enumerate() {
        w.write_record([fmt_f64(hist.edges[i]), fmt_f64(hist.edges[i + 1]), fmt_f64(*d)])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse(format!("{}: {other:?}", path.display())),
    }
}

/// One parsed data row of a sweep CSV; empty numeric cells become `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCsvRow {
    pub distance: f64,
    pub detector: String,
    pub regime: String,
    /// Numeric columns after `regime`, in header order.
    pub values: Vec<Option<f64>>,
    pub error: String,
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepCsvRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_io(path, e))?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                return Ok(None);
            }
            s.parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("{}: bad number `{s}`", path.display())))
        };
        let n = rec.len();
        let mut values = vec![num(&rec[2])?];
        for i in 4..n - 1 {
            values.push(num(&rec[i])?);
        }
        rows.push(SweepCsvRow {
            distance: num(&rec[0])?.unwrap_or(f64::NAN),
            detector: rec[1].to_string(),
            regime: rec[3].to_string(),
            values,
            error: rec[n - 1].to_string(),
        });
    }
    Ok(rows)
}

pub fn sweep_file_name(label: &str) -> String {
    format!("sweep_{label}.csv")
}

pub fn histogram_file_name(label: &str, distance: f64) -> String {
    format!("histogram_{label}_{distance}m.csv")
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Ok(dir.to_path_buf())
}
