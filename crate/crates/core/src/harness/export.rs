use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::{CellResult, MatrixReport, SummaryRow};
use super::stats::{ErrorStats, WindStats};
use crate::error::{Error, Result};
use crate::sim::SimLog;

/// Output encodings: comma-separated tables or TOML documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    #[default]
    Csv,
    Toml,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Toml => "toml",
        }
    }

    /// Guesses from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => ExportFormat::Toml,
            _ => ExportFormat::Csv,
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "toml" | "text" => Ok(ExportFormat::Toml),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}' (expected csv or toml)"))),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_toml<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = toml::to_string(value).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::config(path.display().to_string(), e.to_string().trim_end()))
}

fn write_records<T: Serialize>(records: &[T], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in records {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn export_log(log: &SimLog, path: impl AsRef<Path>, format: ExportFormat) -> Result<()> {
    let path = path.as_ref();
    match format {
        ExportFormat::Csv => log.write_file(path),
        ExportFormat::Toml => write_toml(log, path),
    }
}

/// Reads a log written by [`export_log`]; the format follows the extension.
pub fn import_log(path: impl AsRef<Path>) -> Result<SimLog> {
    let path = path.as_ref();
    match ExportFormat::from_path(path) {
        ExportFormat::Csv => SimLog::read_file(path),
        ExportFormat::Toml => read_toml(path),
    }
}

/// Error and (optional) wind statistics of one log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogStats {
    pub errors: ErrorStats,
    pub wind: Option<WindStats>,
}

#[derive(Serialize)]
struct FlatStats {
    mean_position_m: f64,
    std_position_m: f64,
    mean_heading_deg: f64,
    std_heading_deg: f64,
    samples: u64,
    wind_mean_speed_mps: Option<f64>,
    wind_std_speed_mps: Option<f64>,
    wind_mean_direction_deg: Option<f64>,
    wind_std_direction_deg: Option<f64>,
    wind_intensity_pct: Option<f64>,
}

impl From<&LogStats> for FlatStats {
    fn from(s: &LogStats) -> Self {
        let e = &s.errors;
        Self {
            mean_position_m: e.mean_position_m,
            std_position_m: e.std_position_m,
            mean_heading_deg: e.mean_heading_deg,
            std_heading_deg: e.std_heading_deg,
            samples: e.samples,
            wind_mean_speed_mps: s.wind.map(|w| w.mean_speed_mps),
            wind_std_speed_mps: s.wind.map(|w| w.std_speed_mps),
            wind_mean_direction_deg: s.wind.map(|w| w.mean_direction_deg),
            wind_std_direction_deg: s.wind.map(|w| w.std_direction_deg),
            wind_intensity_pct: s.wind.map(|w| w.intensity_pct),
        }
    }
}

pub fn write_stats<W: Write>(stats: &LogStats, writer: W, format: ExportFormat) -> Result<()> {
    let mut writer = writer;
    let text = match format {
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(FlatStats::from(stats)).map_err(|e| Error::csv("<stats>", e))?;
            String::from_utf8(w.into_inner().map_err(|e| Error::io("<stats>", e.into_error()))?)
                .expect("csv output is utf-8")
        }
        ExportFormat::Toml => toml::to_string(stats).map_err(|e| Error::config("stats", e.to_string()))?,
    };
    writer.write_all(text.as_bytes()).map_err(|e| Error::io("<output>", e))
}

pub fn export_stats(stats: &LogStats, path: impl AsRef<Path>, format: ExportFormat) -> Result<()> {
    let path = path.as_ref();
    write_stats(stats, create(path)?, format).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

#[derive(Serialize)]
struct FlatCell<'a> {
    scenario: &'a str,
    controller: String,
    feedforward: bool,
    seed: u64,
    mean_position_m: f64,
    std_position_m: f64,
    mean_heading_deg: f64,
    std_heading_deg: f64,
    wind_mean_speed_mps: Option<f64>,
    wind_intensity_pct: Option<f64>,
}

impl<'a> From<&'a CellResult> for FlatCell<'a> {
    fn from(r: &'a CellResult) -> Self {
        Self {
            scenario: &r.cell.scenario,
            controller: r.cell.controller.to_string(),
            feedforward: r.cell.feedforward,
            seed: r.cell.seed,
            mean_position_m: r.errors.mean_position_m,
            std_position_m: r.errors.std_position_m,
            mean_heading_deg: r.errors.mean_heading_deg,
            std_heading_deg: r.errors.std_heading_deg,
            wind_mean_speed_mps: r.wind.map(|w| w.mean_speed_mps),
            wind_intensity_pct: r.wind.map(|w| w.intensity_pct),
        }
    }
}

/// Writes the summary table to `dir/summary.<ext>`; CSV also gets a
/// per-run table in `dir/cells.csv`. Returns the summary path.
pub fn export_report(report: &MatrixReport, dir: impl AsRef<Path>, format: ExportFormat) -> Result<std::path::PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let summary = dir.join(format!("summary.{}", format.extension()));
    match format {
        ExportFormat::Csv => {
            write_records::<SummaryRow>(&report.summary, &summary)?;
            let cells: Vec<FlatCell<'_>> = report.cells.iter().map(FlatCell::from).collect();
            write_records(&cells, &dir.join("cells.csv"))?;
        }
        ExportFormat::Toml => write_toml(report, &summary)?,
    }
    Ok(summary)
}

/// Fixed-width text rendering of the summary for terminals.
pub fn format_summary(report: &MatrixReport) -> String {
    let mut out = format!(
        "{:<20} {:<13} {:<4} {:>4} {:>10} {:>10} {:>10} {:>10}\n",
        "scenario", "controller", "ff", "runs", "pos_mean", "pos_std", "hdg_mean", "hdg_std"
    );
    for r in &report.summary {
        out.push_str(&format!(
            "{:<20} {:<13} {:<4} {:>4} {:>10.3} {:>10.3} {:>10.3} {:>10.3}\n",
            r.scenario,
            r.controller.to_string(),
            if r.feedforward { "on" } else { "off" },
            r.runs,
            r.mean_position_m,
            r.std_position_m,
            r.mean_heading_deg,
            r.std_heading_deg
        ));
    }
    out
}
