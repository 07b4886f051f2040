//! Machine-readable reports: full JSON, one-row-per-cell CSV (RFC 4180),
//! and SVG curve plots.
//!
//! Reports are deterministic: identical config and seed produce
//! byte-identical JSON and CSV on the same platform. Wall-clock timings are
//! therefore kept out of the report files and routed to a sidecar.

use crate::config::ExperimentConfig;
use crate::svg;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error("report has no norm curves to plot")]
    NoCurves,
}

/// One result cell. Every cell carries its seed and method provenance
/// through the wrapped record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "cell", rename_all = "snake_case")]
pub enum Cell {
    Norm {
        p: f64,
        n: usize,
        lower: f64,
        upper: f64,
        methods: Vec<String>,
        iterations: usize,
        seed: u64,
    },
    Mikhlin {
        grid: usize,
        sup_product: f64,
        bound: f64,
        margin: f64,
        theta_min: f64,
        inscribed_constant: f64,
        sup_norm: f64,
    },
    LpConstants {
        p: f64,
        n: usize,
        trials: usize,
        ratio_min: f64,
        ratio_max: f64,
        seed: u64,
    },
}

/// Wall time spent producing one cell, keyed like the CSV row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellTiming {
    pub key: String,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Artifact version (crate version at build time).
    pub version: String,
    /// Platform note (os-arch).
    pub platform: String,
    /// Echo of the effective configuration (seed overrides applied).
    pub config: ExperimentConfig,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
    Svg,
}

impl fmt::Display for EmitFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmitFormat::Csv => write!(f, "csv"),
            EmitFormat::Json => write!(f, "json"),
            EmitFormat::Svg => write!(f, "svg"),
        }
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "cell",
    "p",
    "n",
    "grid",
    "trials",
    "lower",
    "upper",
    "ratio_min",
    "ratio_max",
    "sup_product",
    "bound",
    "margin",
    "methods",
    "iterations",
    "seed",
];

impl Report {
    pub fn new(config: ExperimentConfig, cells: Vec<Cell>) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            platform: format!("{}-{}", std::env::consts::OS, std::env::consts::ARCH),
            config,
            cells,
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| ReportError::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Serialize(e.to_string()))
    }

    /// CSV body: fixed 15-column header, one row per cell, empty strings in
    /// the columns a cell kind does not use.
    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)
            .map_err(|e| ReportError::Serialize(e.to_string()))?;
        for cell in &self.cells {
            let row: Vec<String> = match cell {
                Cell::Norm {
                    p,
                    n,
                    lower,
                    upper,
                    methods,
                    iterations,
                    seed,
                } => vec![
                    "norm".into(),
                    fmt_f64(*p),
                    n.to_string(),
                    String::new(),
                    String::new(),
                    fmt_f64(*lower),
                    fmt_f64(*upper),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    methods.join(";"),
                    iterations.to_string(),
                    seed.to_string(),
                ],
                Cell::Mikhlin {
                    grid,
                    sup_product,
                    bound,
                    margin,
                    theta_min,
                    inscribed_constant,
                    sup_norm,
                } => vec![
                    "mikhlin".into(),
                    String::new(),
                    String::new(),
                    grid.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    fmt_f64(*sup_product),
                    fmt_f64(*bound),
                    fmt_f64(*margin),
                    format!(
                        "theta_min={};c={};sup={}",
                        fmt_f64(*theta_min),
                        fmt_f64(*inscribed_constant),
                        fmt_f64(*sup_norm)
                    ),
                    String::new(),
                    String::new(),
                ],
                Cell::LpConstants {
                    p,
                    n,
                    trials,
                    ratio_min,
                    ratio_max,
                    seed,
                } => vec![
                    "lp_constants".into(),
                    fmt_f64(*p),
                    n.to_string(),
                    String::new(),
                    trials.to_string(),
                    String::new(),
                    String::new(),
                    fmt_f64(*ratio_min),
                    fmt_f64(*ratio_max),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    seed.to_string(),
                ],
            };
            w.write_record(&row)
                .map_err(|e| ReportError::Serialize(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ReportError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ReportError::Serialize(e.to_string()))
    }

    pub fn to_svg(&self) -> Result<String, ReportError> {
        svg::norm_curves_svg(self).ok_or(ReportError::NoCurves)
    }

    pub fn emit(&self, format: EmitFormat, path: &Path) -> Result<(), ReportError> {
        let body = match format {
            EmitFormat::Json => self.to_json()?,
            EmitFormat::Csv => self.to_csv()?,
            EmitFormat::Svg => self.to_svg()?,
        };
        write_file(path, body.as_bytes())
    }
}

/// Shortest round-trip decimal form; deterministic for a given bit pattern.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v}")
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| ReportError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
        }
    }
    let mut f = fs::File::create(path).map_err(|e| ReportError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    f.write_all(bytes).map_err(|e| ReportError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Writes the timing sidecar next to the report files.
pub fn write_timings(path: &Path, timings: &[CellTiming]) -> Result<(), ReportError> {
    let body = serde_json::to_string_pretty(timings)
        .map_err(|e| ReportError::Serialize(e.to_string()))?;
    write_file(path, body.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentKind, ModelSpec};

    fn sample_report() -> Report {
        let config = ExperimentConfig {
            version: 1,
            kind: ExperimentKind::NormTable,
            set: None,
            theta0: None,
            model: Some(ModelSpec {
                variant: "singular_inner".into(),
                coeffs: None,
                poles: None,
                weights: None,
                zeros: None,
            }),
            p_list: vec![2.0, 4.0],
            n_list: vec![64, 128],
            grid: 8192,
            trials: 500,
            seed: 9,
            tol: 1e-8,
        };
        let cells = vec![
            Cell::Norm {
                p: 2.0,
                n: 64,
                lower: 0.9,
                upper: 1.0,
                methods: vec!["power_iteration".into()],
                iterations: 0,
                seed: 9,
            },
            Cell::Norm {
                p: 4.0,
                n: 128,
                lower: 1.05,
                upper: 2.3,
                methods: vec!["boyd_lower_dual_pair".into(), "riesz_thorin_upper".into()],
                iterations: 123,
                seed: 9,
            },
        ];
        Report::new(config, cells)
    }

    #[test]
    fn csv_has_header_plus_row_per_cell() {
        let report = sample_report();
        let csv = report.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + report.cells.len());
        assert!(lines[0].starts_with("cell,p,n,"));

        let empty = Report::new(report.config.clone(), vec![]);
        let csv = empty.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn json_round_trip_is_field_for_field() {
        let report = sample_report();
        let json = report.to_json().unwrap();
        let back = Report::from_json(&json).unwrap();
        let a: serde_json::Value = serde_json::from_str(&json).unwrap();
        let b: serde_json::Value = serde_json::from_str(&back.to_json().unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn svg_present_only_with_curves() {
        let report = sample_report();
        let svg = report.to_svg().unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));

        let no_curves = Report::new(report.config.clone(), vec![]);
        assert!(matches!(no_curves.to_svg(), Err(ReportError::NoCurves)));
    }
}
