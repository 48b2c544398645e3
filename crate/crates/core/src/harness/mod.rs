//! Scenario files, experiment matrices, summary statistics and export.

mod config;
mod export;
mod matrix;
mod stats;

pub use config::{load_matrix, load_scenario, load_sim_config, Matrix, MatrixFile};
pub use export::{
    export_log, export_report, export_stats, format_summary, import_log, write_stats, ExportFormat, LogStats,
};
pub use matrix::{expand_cells, run_experiment_matrix, Cell, CellResult, MatrixReport, SummaryRow};
pub use stats::{
    anemometer_record, compute_error_stats, compute_wind_stats, log_stats, ErrorAccumulator, ErrorStats, Moments,
    WindStats,
};
