use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integration and loop rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub dt_s: f64,
    pub control_rate_hz: f64,
    pub anemometer_rate_hz: f64,
    pub duration_s: f64,
    pub seed: u64,
    pub sensors: SensorModels,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt_s: 0.05,
            control_rate_hz: 4.0,
            anemometer_rate_hz: 1.0,
            duration_s: 700.0,
            seed: 0,
            sensors: SensorModels::default(),
        }
    }
}

fn ticks_per(period: f64, dt: f64, what: &str) -> Result<u64> {
    let ticks = (period / dt).round();
    if ticks < 1.0 || ((ticks * dt) - period).abs() > 1e-9 * period.max(1.0) {
        return Err(Error::config(
            "sim",
            format!("{what} period {period} s is not a whole number of physics steps of {dt} s"),
        ));
    }
    Ok(ticks as u64)
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_s > 0.0) || !(self.duration_s > 0.0) {
            return Err(Error::config("sim", "dt_s and duration_s must be positive"));
        }
        if !(self.control_rate_hz > 0.0) || self.control_rate_hz > 1.0 / self.dt_s + 1e-9 {
            return Err(Error::config("sim", format!("control_rate_hz must lie in (0, 1/dt_s], got {}", self.control_rate_hz)));
        }
        if !(self.anemometer_rate_hz > 0.0) {
            return Err(Error::config("sim", "anemometer_rate_hz must be positive"));
        }
        self.control_ticks()?;
        self.anemometer_ticks()?;
        self.sensors.validate()
    }

    /// Physics steps per control tick.
    pub fn control_ticks(&self) -> Result<u64> {
        ticks_per(1.0 / self.control_rate_hz, self.dt_s, "control")
    }

    pub fn anemometer_ticks(&self) -> Result<u64> {
        ticks_per(1.0 / self.anemometer_rate_hz, self.dt_s, "anemometer")
    }

    pub fn steps(&self) -> u64 {
        (self.duration_s / self.dt_s).round() as u64
    }

    pub fn control_dt(&self) -> f64 {
        1.0 / self.control_rate_hz
    }
}

/// Resolution of the navigation and wind sensors and whether each
/// degradation is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorModels {
    pub gps_enabled: bool,
    pub gps_resolution_m: f64,
    pub compass_enabled: bool,
    pub compass_resolution_deg: f64,
    pub anemometer_enabled: bool,
    pub anemometer_resolution_mps: f64,
    pub anemometer_max_mps: f64,
}

impl Default for SensorModels {
    fn default() -> Self {
        Self {
            gps_enabled: true,
            gps_resolution_m: 1.0,
            compass_enabled: true,
            compass_resolution_deg: 0.1,
            anemometer_enabled: true,
            anemometer_resolution_mps: 0.1,
            anemometer_max_mps: 40.0,
        }
    }
}

impl SensorModels {
    /// All sensors report the true values.
    pub fn ideal() -> Self {
        Self { gps_enabled: false, compass_enabled: false, anemometer_enabled: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let r = [self.gps_resolution_m, self.compass_resolution_deg, self.anemometer_resolution_mps, self.anemometer_max_mps];
        if r.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::config("sim.sensors", "resolutions and range must be positive"))
        }
    }
}
