//! Sweep results: one row per cell, aggregates per (snr, method, alpha),
//! and the CSV / JSON writers.

use serde::Serialize;

use super::Method;
use crate::channel::OperatingPoint;
use crate::metrics::MetricReport;
use crate::serde_float::{self, non_finite_name};

pub const CSV_HEADER: [&str; 12] = [
    "image",
    "snr_db",
    "method",
    "alpha",
    "seed",
    "ssim",
    "psnr_db",
    "mse",
    "iou_loss",
    "char_error_rate",
    "payload_bytes",
    "error",
];

/// One sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub image: String,
    #[serde(serialize_with = "serde_float::serialize")]
    pub snr_db: f64,
    pub method: Method,
    pub alpha: f64,
    /// Channel sub-seed the cell ran with.
    pub seed: u64,
    #[serde(flatten)]
    pub metrics: Option<MetricReport>,
    pub error: Option<String>,
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    #[serde(serialize_with = "serde_float::serialize")]
    pub mean: f64,
    #[serde(serialize_with = "serde_float::serialize")]
    pub std: f64,
}

impl Stat {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        if !mean.is_finite() {
            return Some(Stat { mean, std: f64::NAN });
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(Stat { mean, std: var.sqrt() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    #[serde(serialize_with = "serde_float::serialize")]
    pub snr_db: f64,
    pub method: Method,
    pub alpha: f64,
    /// Cells that produced metrics.
    pub cells: usize,
    pub errors: usize,
    pub ssim: Option<Stat>,
    pub psnr_db: Option<Stat>,
    pub mse: Option<Stat>,
    pub iou_loss: Option<Stat>,
    pub char_error_rate: Option<Stat>,
}

impl Aggregate {
    pub fn from_rows<'a>(snr_db: f64, method: Method, alpha: f64, rows: impl IntoIterator<Item = &'a SweepRow>) -> Self {
        let mut errors = 0;
        let mut ok = Vec::new();
        for r in rows {
            match &r.metrics {
                Some(m) => ok.push(*m),
                None => errors += 1,
            }
        }
        let col = |f: &dyn Fn(&MetricReport) -> Option<f64>| Stat::of(&ok.iter().filter_map(f).collect::<Vec<_>>());
        Aggregate {
            snr_db,
            method,
            alpha,
            cells: ok.len(),
            errors,
            ssim: col(&|m| Some(m.ssim)),
            psnr_db: col(&|m| Some(m.psnr_db)),
            mse: col(&|m| Some(m.mse)),
            iou_loss: col(&|m| m.iou_loss),
            char_error_rate: col(&|m| m.char_error_rate),
        }
    }
}

/// Link geometry that realizes one grid SNR under the configured channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatingPointEntry {
    #[serde(serialize_with = "serde_float::serialize")]
    pub snr_db: f64,
    pub frequency_khz: Option<f64>,
    pub distance_km: Option<f64>,
    pub note: Option<String>,
}

impl OperatingPointEntry {
    pub fn new(snr_db: f64, found: Result<OperatingPoint, String>) -> Self {
        match found {
            Ok(op) => OperatingPointEntry {
                snr_db,
                frequency_khz: Some(op.frequency_khz),
                distance_km: Some(op.distance_km),
                note: None,
            },
            Err(note) => OperatingPointEntry { snr_db, frequency_khz: None, distance_km: None, note: Some(note) },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rng_algorithm: String,
    pub seed: u64,
    pub payload_format_version: u8,
    pub tensor_format_version: u8,
    pub wire_precision: String,
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
    pub operating_points: Vec<OperatingPointEntry>,
    /// Per-cell log lines in cell order, including captured external output.
    #[serde(skip)]
    pub log: Vec<String>,
}

/// Shortest round-trip decimal, with `inf`, `-inf` and `nan` for the rest.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        non_finite_name(v).to_string()
    }
}

impl SweepReport {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Aggregate for one grid point, if present.
    pub fn aggregate(&self, snr_db: f64, method: Method, alpha: f64) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.snr_db.to_bits() == snr_db.to_bits() && a.method == method && a.alpha.to_bits() == alpha.to_bits())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        for r in &self.rows {
            let m = r.metrics.as_ref();
            w.write_record([
                r.image.clone(),
                fmt_f64(r.snr_db),
                r.method.name().to_string(),
                fmt_f64(r.alpha),
                r.seed.to_string(),
                opt(m.map(|m| m.ssim)),
                opt(m.map(|m| m.psnr_db)),
                opt(m.map(|m| m.mse)),
                opt(m.and_then(|m| m.iou_loss)),
                opt(m.and_then(|m| m.char_error_rate)),
                m.map(|m| m.payload_bytes.to_string()).unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(image: &str, ssim: Option<f64>) -> SweepRow {
        SweepRow {
            image: image.into(),
            snr_db: f64::INFINITY,
            method: Method::Composite,
            alpha: 0.5,
            seed: 9,
            metrics: ssim.map(|ssim| MetricReport {
                ssim,
                psnr_db: f64::INFINITY,
                mse: 0.0,
                iou_loss: None,
                char_error_rate: Some(0.0),
                payload_bytes: 10,
            }),
            error: ssim.is_none().then(|| "boom, \"quoted\"".to_string()),
        }
    }

    fn report() -> SweepReport {
        let rows = vec![row("a.ppm", Some(0.75)), row("b.ppm", None)];
        let aggregates = vec![Aggregate::from_rows(f64::INFINITY, Method::Composite, 0.5, &rows)];
        SweepReport {
            rng_algorithm: "test".into(),
            seed: 1,
            payload_format_version: 1,
            tensor_format_version: 1,
            wire_precision: "f64".into(),
            rows,
            aggregates,
            operating_points: vec![],
            log: vec![],
        }
    }

    #[test]
    fn csv_layout() {
        let csv = String::from_utf8(report().to_csv().unwrap()).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "image,snr_db,method,alpha,seed,ssim,psnr_db,mse,iou_loss,char_error_rate,payload_bytes,error");
        assert_eq!(lines[1], "a.ppm,inf,composite,0.5,9,0.75,inf,0,,0,10,");
        assert_eq!(lines[2], "b.ppm,inf,composite,0.5,9,,,,,,,\"boom, \"\"quoted\"\"\"");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn json_mirrors_rows() {
        let v: serde_json::Value = serde_json::from_str(&report().to_json().unwrap()).unwrap();
        assert_eq!(v["rows"][0]["snr_db"], "inf");
        assert_eq!(v["rows"][0]["psnr_db"], "inf");
        assert_eq!(v["rows"][0]["method"], "composite");
        assert_eq!(v["rows"][1]["error"], "boom, \"quoted\"");
        assert_eq!(v["aggregates"][0]["cells"], 1);
        assert_eq!(v["aggregates"][0]["errors"], 1);
        assert_eq!(v["aggregates"][0]["ssim"]["mean"], 0.75);
        assert_eq!(v["aggregates"][0]["ssim"]["std"], 0.0);
    }

    #[test]
    fn population_std() {
        let s = Stat::of(&[1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.std), (2.0, 1.0));
        assert!(Stat::of(&[]).is_none());
    }
}
