//! Per-control-tick simulation log and its CSV form.
//!
//! The file starts with `#`-prefixed metadata lines (tool version, seed and
//! an echo of the scenario and loop configuration), followed by a header
//! row whose names are the field names of [`LogRow`] in declaration order.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::allocation::AllocationResult;
use crate::error::{Error, Result};
use crate::types::{ThrusterSetpoint, VehicleState, Wrench};
use crate::wind::WindSample;

pub const LOG_COLUMNS: [&str; 44] = [
    "t_s",
    "x_m",
    "y_m",
    "psi_rad",
    "u_mps",
    "v_mps",
    "r_radps",
    "x_meas_m",
    "y_meas_m",
    "psi_meas_rad",
    "err_x_m",
    "err_y_m",
    "err_psi_rad",
    "tau_x_n",
    "tau_y_n",
    "tau_n_nm",
    "wind_est_x_n",
    "wind_est_y_n",
    "wind_est_n_nm",
    "tau_cmd_x_n",
    "tau_cmd_y_n",
    "tau_cmd_n_nm",
    "f_port_x_n",
    "f_port_y_n",
    "f_stbd_x_n",
    "f_stbd_y_n",
    "cmd_port_thrust_n",
    "cmd_stbd_thrust_n",
    "cmd_port_azimuth_rad",
    "cmd_stbd_azimuth_rad",
    "out_port_thrust_n",
    "out_stbd_thrust_n",
    "out_port_azimuth_rad",
    "out_stbd_azimuth_rad",
    "saturated",
    "anemo_speed_mps",
    "anemo_angle_rad",
    "anemo_filt_speed_mps",
    "anemo_filt_angle_rad",
    "wind_x_n",
    "wind_y_n",
    "wind_n_nm",
    "true_wind_speed_mps",
    "true_wind_dir_rad",
];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LogRow {
    pub t_s: f64,
    pub x_m: f64,
    pub y_m: f64,
    pub psi_rad: f64,
    pub u_mps: f64,
    pub v_mps: f64,
    pub r_radps: f64,
    pub x_meas_m: f64,
    pub y_meas_m: f64,
    pub psi_meas_rad: f64,
    pub err_x_m: f64,
    pub err_y_m: f64,
    pub err_psi_rad: f64,
    pub tau_x_n: f64,
    pub tau_y_n: f64,
    pub tau_n_nm: f64,
    pub wind_est_x_n: f64,
    pub wind_est_y_n: f64,
    pub wind_est_n_nm: f64,
    pub tau_cmd_x_n: f64,
    pub tau_cmd_y_n: f64,
    pub tau_cmd_n_nm: f64,
    pub f_port_x_n: f64,
    pub f_port_y_n: f64,
    pub f_stbd_x_n: f64,
    pub f_stbd_y_n: f64,
    pub cmd_port_thrust_n: f64,
    pub cmd_stbd_thrust_n: f64,
    pub cmd_port_azimuth_rad: f64,
    pub cmd_stbd_azimuth_rad: f64,
    pub out_port_thrust_n: f64,
    pub out_stbd_thrust_n: f64,
    pub out_port_azimuth_rad: f64,
    pub out_stbd_azimuth_rad: f64,
    pub saturated: bool,
    pub anemo_speed_mps: f64,
    pub anemo_angle_rad: f64,
    pub anemo_filt_speed_mps: f64,
    pub anemo_filt_angle_rad: f64,
    pub wind_x_n: f64,
    pub wind_y_n: f64,
    pub wind_n_nm: f64,
    pub true_wind_speed_mps: f64,
    pub true_wind_dir_rad: f64,
}

/// Everything recorded on one control tick, in structured form.
pub struct TickRecord<'a> {
    pub t: f64,
    pub state: &'a VehicleState,
    pub sensed: &'a VehicleState,
    pub error: Vector3<f64>,
    pub tau: Wrench,
    pub wind_estimate: Wrench,
    pub tau_cmd: Wrench,
    pub allocation: &'a AllocationResult,
    pub output: ThrusterSetpoint,
    pub anemometer: WindSample,
    pub anemometer_filtered: WindSample,
    pub wind: Wrench,
    pub true_wind: (f64, f64),
}

impl From<TickRecord<'_>> for LogRow {
    fn from(r: TickRecord<'_>) -> Self {
        let a = r.allocation;
        Self {
            t_s: r.t,
            x_m: r.state.eta[0],
            y_m: r.state.eta[1],
            psi_rad: r.state.eta[2],
            u_mps: r.state.nu[0],
            v_mps: r.state.nu[1],
            r_radps: r.state.nu[2],
            x_meas_m: r.sensed.eta[0],
            y_meas_m: r.sensed.eta[1],
            psi_meas_rad: r.sensed.eta[2],
            err_x_m: r.error[0],
            err_y_m: r.error[1],
            err_psi_rad: r.error[2],
            tau_x_n: r.tau.x,
            tau_y_n: r.tau.y,
            tau_n_nm: r.tau.n,
            wind_est_x_n: r.wind_estimate.x,
            wind_est_y_n: r.wind_estimate.y,
            wind_est_n_nm: r.wind_estimate.n,
            tau_cmd_x_n: r.tau_cmd.x,
            tau_cmd_y_n: r.tau_cmd.y,
            tau_cmd_n_nm: r.tau_cmd.n,
            f_port_x_n: a.raw.port_x,
            f_port_y_n: a.raw.port_y,
            f_stbd_x_n: a.raw.starboard_x,
            f_stbd_y_n: a.raw.starboard_y,
            cmd_port_thrust_n: a.setpoint.port_thrust,
            cmd_stbd_thrust_n: a.setpoint.starboard_thrust,
            cmd_port_azimuth_rad: a.setpoint.port_azimuth,
            cmd_stbd_azimuth_rad: a.setpoint.starboard_azimuth,
            out_port_thrust_n: r.output.port_thrust,
            out_stbd_thrust_n: r.output.starboard_thrust,
            out_port_azimuth_rad: r.output.port_azimuth,
            out_stbd_azimuth_rad: r.output.starboard_azimuth,
            saturated: a.saturated,
            anemo_speed_mps: r.anemometer.speed,
            anemo_angle_rad: r.anemometer.angle,
            anemo_filt_speed_mps: r.anemometer_filtered.speed,
            anemo_filt_angle_rad: r.anemometer_filtered.angle,
            wind_x_n: r.wind.x,
            wind_y_n: r.wind.y,
            wind_n_nm: r.wind.n,
            true_wind_speed_mps: r.true_wind.0,
            true_wind_dir_rad: r.true_wind.1,
        }
    }
}

impl LogRow {
    /// Earth-frame pose error with the heading wrapped.
    pub fn error(&self) -> Vector3<f64> {
        Vector3::new(self.err_x_m, self.err_y_m, self.err_psi_rad)
    }

    pub fn command(&self) -> ThrusterSetpoint {
        ThrusterSetpoint {
            port_thrust: self.cmd_port_thrust_n,
            starboard_thrust: self.cmd_stbd_thrust_n,
            port_azimuth: self.cmd_port_azimuth_rad,
            starboard_azimuth: self.cmd_stbd_azimuth_rad,
        }
    }

    pub fn output(&self) -> ThrusterSetpoint {
        ThrusterSetpoint {
            port_thrust: self.out_port_thrust_n,
            starboard_thrust: self.out_stbd_thrust_n,
            port_azimuth: self.out_port_azimuth_rad,
            starboard_azimuth: self.out_stbd_azimuth_rad,
        }
    }
}

/// Key/value pairs written as `# key: value` above the table.
pub type Metadata = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SimLog {
    pub metadata: Metadata,
    pub rows: Vec<LogRow>,
}

impl SimLog {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        for (k, v) in &self.metadata {
            let mut lines = v.lines();
            let first = lines.next().unwrap_or("");
            writeln!(writer, "# {k}: {first}").map_err(|e| Error::io("<writer>", e))?;
            for line in lines {
                writeln!(writer, "#   {line}").map_err(|e| Error::io("<writer>", e))?;
            }
        }
        let mut w = csv::Writer::from_writer(writer);
        if self.rows.is_empty() {
            w.write_record(LOG_COLUMNS).map_err(|e| Error::csv("<writer>", e))?;
        }
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::csv("<writer>", e))?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        Self::read_named(reader, "<reader>")
    }

    fn read_named<R: Read>(reader: R, name: &str) -> Result<Self> {
        let mut text = String::new();
        let mut reader = reader;
        reader.read_to_string(&mut text).map_err(|e| Error::io(name, e))?;
        let mut metadata: Metadata = Vec::new();
        let mut body_start = 0;
        for line in text.lines() {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len() + 1;
            if let Some(cont) = rest.strip_prefix("   ") {
                if let Some(last) = metadata.last_mut() {
                    last.1.push('\n');
                    last.1.push_str(cont);
                }
            } else if let Some((k, v)) = rest.trim_start().split_once(':').map(|(k, v)| (k, v.strip_prefix(' ').unwrap_or(v))) {
                metadata.push((k.to_string(), v.to_string()));
            }
        }
        let body = text.get(body_start.min(text.len())..).unwrap_or("");
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let header = r.headers().map_err(|e| Error::csv(name, e))?.clone();
        if header.iter().ne(LOG_COLUMNS.iter().copied()) {
            return Err(Error::config(name, "log header does not match the documented column order"));
        }
        let rows = r.deserialize().collect::<std::result::Result<Vec<LogRow>, _>>().map_err(|e| Error::csv(name, e))?;
        Ok(Self { metadata, rows })
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_named(f, &path.display().to_string())
    }
}
