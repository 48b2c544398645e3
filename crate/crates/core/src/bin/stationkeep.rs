use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Deserialize;

use stationkeep::harness::{
    export_log, export_report, format_summary, import_log, load_matrix, load_scenario, load_sim_config, log_stats,
    run_experiment_matrix, write_stats, ExportFormat,
};
use stationkeep::sim::{run_station_keeping, run_sysid_maneuver, Maneuver, SensorModels, SimConfig, WindSpec};
use stationkeep::wind::{synthesize_wind, write_wind_trace};
use stationkeep::{Error, Result};

#[derive(Parser)]
#[command(name = "stationkeep", version, about = "Station-keeping simulation for a twin-hull azimuth-drive USV")]
struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output directory (created if missing).
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// csv or toml.
    #[arg(short, long, default_value = "csv")]
    format: ExportFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Run one closed-loop scenario and write its log.
    Simulate {
        scenario: PathBuf,
        /// Simulation settings file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        duration: Option<f64>,
        /// Turn off GPS, compass and anemometer quantization.
        #[arg(long)]
        ideal_sensors: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run every cell of an experiment matrix and write the summary.
    Matrix {
        matrix: PathBuf,
        /// Skip the per-run logs.
        #[arg(long)]
        no_logs: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Open-loop identification maneuver: bollard, acceleration, circle,
    /// zigzag, or a TOML file describing one.
    Sysid {
        maneuver: String,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        /// Physics steps per log row.
        #[arg(long, default_value_t = 5)]
        log_every: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Synthesize a true-wind trace from a parameter file.
    Windgen {
        params: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV file.
        #[arg(short, long, default_value = "wind.csv")]
        out: PathBuf,
    },
    /// Error and wind statistics of a simulation log.
    Stats {
        log: PathBuf,
        #[arg(short, long, default_value = "toml")]
        format: ExportFormat,
        #[arg(long, default_value_t = 1.0)]
        anemometer_period: f64,
    },
}

/// Parameter file for `windgen`.
#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct WindGenFile {
    seed: u64,
    duration_s: f64,
    mean_speed_mps: f64,
    mean_direction_deg: f64,
    intensity: f64,
    cutoff_hz: f64,
    direction_std_deg: f64,
    sample_dt_s: f64,
}

impl Default for WindGenFile {
    fn default() -> Self {
        let w = WindSpec::default();
        Self {
            seed: 0,
            duration_s: 700.0,
            mean_speed_mps: 0.0,
            mean_direction_deg: 0.0,
            intensity: 0.0,
            cutoff_hz: w.cutoff_hz,
            direction_std_deg: 0.0,
            sample_dt_s: 1.0,
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })
}

fn simulate(
    scenario: &Path,
    config: Option<&Path>,
    seed: Option<u64>,
    duration: Option<f64>,
    ideal: bool,
    output: &Output,
) -> Result<()> {
    let scenario = load_scenario(scenario)?;
    let mut cfg = match config {
        Some(p) => load_sim_config(p)?,
        None => SimConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(d) = duration {
        cfg.duration_s = d;
    }
    if ideal {
        cfg.sensors = SensorModels::ideal();
    }
    cfg.validate()?;
    create_dir(&output.out)?;
    info!("simulating '{}' with {} for {} s (seed {})", scenario.name, scenario.controller, cfg.duration_s, cfg.seed);
    let log = run_station_keeping(&scenario, &cfg)?;
    let path = output.out.join(format!("{}.{}", scenario.name, output.format.extension()));
    export_log(&log, &path, output.format)?;
    let stats = log_stats(&log, 1.0 / cfg.anemometer_rate_hz)?;
    let e = stats.errors;
    println!(
        "{}: position {:.3} ± {:.3} m, heading {:.3} ± {:.3} deg -> {}",
        scenario.name,
        e.mean_position_m,
        e.std_position_m,
        e.mean_heading_deg,
        e.std_heading_deg,
        path.display()
    );
    Ok(())
}

fn matrix(path: &Path, no_logs: bool, output: &Output) -> Result<()> {
    let matrix = load_matrix(path)?;
    create_dir(&output.out)?;
    let logs = output.out.join("logs");
    info!("matrix '{}': {} scenarios, {} seeds", matrix.name, matrix.scenarios.len(), matrix.seeds.len());
    let report = run_experiment_matrix(&matrix, if no_logs { None } else { Some(&logs) })?;
    let summary = export_report(&report, &output.out, output.format)?;
    print!("{}", format_summary(&report));
    println!("summary -> {}", summary.display());
    Ok(())
}

fn sysid(name: &str, dt: f64, log_every: u64, output: &Output) -> Result<()> {
    let maneuver = if name.ends_with(".toml") {
        let text = std::fs::read_to_string(name).map_err(|e| Error::Io { path: name.into(), source: e })?;
        toml::from_str::<Maneuver>(&text)
            .map_err(|e| Error::Config { context: name.into(), message: e.to_string().trim_end().into() })?
    } else {
        Maneuver::standard(name)?
    };
    create_dir(&output.out)?;
    let log = run_sysid_maneuver(&maneuver, &Default::default(), dt, log_every)?;
    let path = output.out.join(format!("sysid_{}.{}", maneuver.name(), output.format.extension()));
    export_log(&log, &path, output.format)?;
    println!("{} maneuver: {} rows -> {}", maneuver.name(), log.rows.len(), path.display());
    Ok(())
}

fn windgen(params: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(params).map_err(|e| Error::Io { path: params.into(), source: e })?;
    let p: WindGenFile = toml::from_str(&text)
        .map_err(|e| Error::Config { context: params.display().to_string(), message: e.to_string().trim_end().into() })?;
    let spec = WindSpec {
        mean_speed_mps: p.mean_speed_mps,
        mean_direction_deg: p.mean_direction_deg,
        intensity: p.intensity,
        cutoff_hz: p.cutoff_hz,
        direction_std_deg: p.direction_std_deg,
        sample_dt_s: p.sample_dt_s,
        trace_path: None,
    };
    let mut synthesis = spec.synthesis(p.duration_s);
    synthesis.duration = p.duration_s;
    let samples = synthesize_wind(seed.unwrap_or(p.seed), &synthesis)?;
    write_wind_trace(out, &samples)?;
    println!("{} samples -> {}", samples.len(), out.display());
    Ok(())
}

fn stats(path: &Path, format: ExportFormat, period: f64) -> Result<()> {
    let log = import_log(path)?;
    write_stats(&log_stats(&log, period)?, std::io::stdout().lock(), format)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { scenario, config, seed, duration, ideal_sensors, output } => {
            simulate(&scenario, config.as_deref(), seed, duration, ideal_sensors, &output)
        }
        Command::Matrix { matrix: path, no_logs, output } => matrix(&path, no_logs, &output),
        Command::Sysid { maneuver, dt, log_every, output } => sysid(&maneuver, dt, log_every, &output),
        Command::Windgen { params, seed, out } => windgen(&params, seed, &out),
        Command::Stats { log, format, anemometer_period } => stats(&log, format, anemometer_period),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonFinite { .. } | Error::CellFailed { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
