use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Matrix;
use super::stats::{anemometer_record, compute_wind_stats, ErrorAccumulator, ErrorStats, WindStats};
use crate::control::ControllerKind;
use crate::error::{Error, Result};
use crate::sim::{run_station_keeping, Scenario, SimConfig};

/// One run of the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub scenario: String,
    pub controller: ControllerKind,
    pub feedforward: bool,
    pub seed: u64,
}

impl Cell {
    /// File name of the cell's log.
    pub fn log_name(&self) -> String {
        let ff = if self.feedforward { "ff" } else { "noff" };
        format!("{}__{}__{}__seed{}.csv", self.scenario, self.controller, ff, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Cell,
    pub errors: ErrorStats,
    pub wind: Option<WindStats>,
}

/// Seeds pooled per scenario, controller and feedforward setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub controller: ControllerKind,
    pub feedforward: bool,
    pub runs: usize,
    pub mean_position_m: f64,
    pub std_position_m: f64,
    pub mean_heading_deg: f64,
    pub std_heading_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub name: String,
    pub cells: Vec<CellResult>,
    pub summary: Vec<SummaryRow>,
}

impl MatrixReport {
    pub fn row(&self, scenario: &str, controller: ControllerKind, feedforward: bool) -> Option<&SummaryRow> {
        self.summary
            .iter()
            .find(|r| r.scenario == scenario && r.controller == controller && r.feedforward == feedforward)
    }
}

struct Job<'a> {
    cell: Cell,
    scenario: Scenario,
    config: SimConfig,
    source: &'a Scenario,
}

/// Cells in a fixed order: scenario, controller, feedforward, seed.
pub fn expand_cells(matrix: &Matrix) -> Vec<Cell> {
    jobs(matrix).into_iter().map(|j| j.cell).collect()
}

fn jobs(matrix: &Matrix) -> Vec<Job<'_>> {
    let mut out = Vec::new();
    for source in &matrix.scenarios {
        let controllers = if matrix.controllers.is_empty() { vec![source.controller] } else { matrix.controllers.clone() };
        let ffs = if matrix.feedforward.is_empty() { vec![source.feedforward] } else { matrix.feedforward.clone() };
        for &controller in &controllers {
            for &feedforward in &ffs {
                for &seed in &matrix.seeds {
                    out.push(Job {
                        cell: Cell { scenario: source.name.clone(), controller, feedforward, seed },
                        scenario: Scenario { controller, feedforward, ..source.clone() },
                        config: SimConfig { seed, ..matrix.sim },
                        source,
                    });
                }
            }
        }
    }
    out
}

fn run_cell(job: &Job<'_>, log_dir: Option<&Path>) -> Result<(CellResult, ErrorAccumulator)> {
    let log = run_station_keeping(&job.scenario, &job.config).map_err(|e| Error::CellFailed {
        cell: job.cell.log_name().trim_end_matches(".csv").to_string(),
        source: Box::new(e),
    })?;
    if let Some(dir) = log_dir {
        log.write_file(dir.join(job.cell.log_name()))?;
    }
    let mut acc = ErrorAccumulator::default();
    log.rows.iter().for_each(|r| acc.push(r));
    let wind = if job.source.wind.is_some() {
        let (samples, dt) = anemometer_record(&log, 1.0 / job.config.anemometer_rate_hz)?;
        Some(compute_wind_stats(&samples, dt)?)
    } else {
        None
    };
    Ok((CellResult { cell: job.cell.clone(), errors: acc.finish()?, wind }, acc))
}

/// Runs every cell in parallel, optionally writing one CSV log per cell into
/// `log_dir`. The first failing cell (in cell order) aborts the matrix.
pub fn run_experiment_matrix(matrix: &Matrix, log_dir: Option<&Path>) -> Result<MatrixReport> {
    matrix.validate()?;
    if let Some(dir) = log_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let jobs = jobs(matrix);
    let results: Vec<Result<(CellResult, ErrorAccumulator)>> = jobs
        .par_iter()
        .map(|job| run_cell(job, log_dir))
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut summary: Vec<(SummaryRow, ErrorAccumulator)> = Vec::new();
    for (result, acc) in &results {
        let c = &result.cell;
        match summary
            .iter_mut()
            .find(|(r, _)| r.scenario == c.scenario && r.controller == c.controller && r.feedforward == c.feedforward)
        {
            Some((row, pooled)) => {
                row.runs += 1;
                pooled.merge(acc);
            }
            None => summary.push((
                SummaryRow {
                    scenario: c.scenario.clone(),
                    controller: c.controller,
                    feedforward: c.feedforward,
                    runs: 1,
                    mean_position_m: 0.0,
                    std_position_m: 0.0,
                    mean_heading_deg: 0.0,
                    std_heading_deg: 0.0,
                },
                *acc,
            )),
        }
    }
    let summary = summary
        .into_iter()
        .map(|(row, acc)| {
            let s = acc.finish()?;
            Ok(SummaryRow {
                mean_position_m: s.mean_position_m,
                std_position_m: s.std_position_m,
                mean_heading_deg: s.mean_heading_deg,
                std_heading_deg: s.std_heading_deg,
                ..row
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixReport { name: matrix.name.clone(), cells: results.into_iter().map(|(r, _)| r).collect(), summary })
}
