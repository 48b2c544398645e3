use std::path::PathBuf;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::allocation::AllocatorConfig;
use crate::angle::rad;
use crate::control::{ControllerGains, ControllerKind, Setpoint};
use crate::error::{Error, Result};
use crate::types::VehicleState;
use crate::vehicle::VehicleParams;
use crate::wind::{CurrentParams, WindParams, WindSynthesis};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Pose {
    pub x_m: f64,
    pub y_m: f64,
    pub heading_deg: f64,
}

impl Pose {
    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x_m, self.y_m, rad(self.heading_deg))
    }
}

/// Gusty wind, either synthesized from statistics or replayed from a CSV
/// trace (`t, V, direction_deg`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindSpec {
    pub mean_speed_mps: f64,
    /// Direction the wind blows from, earth frame.
    pub mean_direction_deg: f64,
    pub intensity: f64,
    pub cutoff_hz: f64,
    pub direction_std_deg: f64,
    /// Spacing of the synthesized series; the simulator interpolates.
    pub sample_dt_s: f64,
    pub trace_path: Option<PathBuf>,
}

impl Default for WindSpec {
    fn default() -> Self {
        Self {
            mean_speed_mps: 0.0,
            mean_direction_deg: 0.0,
            intensity: 0.0,
            cutoff_hz: 0.03,
            direction_std_deg: 0.0,
            sample_dt_s: 0.25,
            trace_path: None,
        }
    }
}

impl WindSpec {
    pub fn synthesis(&self, duration_s: f64) -> WindSynthesis {
        WindSynthesis {
            mean_speed: self.mean_speed_mps,
            mean_direction: rad(self.mean_direction_deg),
            intensity: self.intensity,
            cutoff_hz: self.cutoff_hz,
            direction_std: rad(self.direction_std_deg),
            // one extra sample so interpolation covers the final step
            duration: duration_s + self.sample_dt_s,
            dt: self.sample_dt_s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurrentSpec {
    pub speed_mps: f64,
    /// Direction the water flows toward, earth frame.
    pub direction_deg: f64,
    pub modulation_amplitude_mps: f64,
    pub modulation_period_s: f64,
}

impl CurrentSpec {
    pub fn params(&self) -> CurrentParams {
        CurrentParams {
            speed: self.speed_mps,
            direction: rad(self.direction_deg),
            modulation_amplitude: self.modulation_amplitude_mps,
            modulation_period_s: self.modulation_period_s,
        }
    }
}

/// One station-keeping experiment: vehicle, environment and controller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub controller: ControllerKind,
    pub feedforward: bool,
    pub setpoint: Pose,
    /// Start offset from the setpoint (zero by default).
    pub initial_offset: Pose,
    pub wind: Option<WindSpec>,
    pub current: CurrentSpec,
    pub gains: ControllerGains,
    pub vehicle: VehicleParams,
    pub wind_model: WindParams,
    pub allocator: Option<AllocatorConfig>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: String::new(),
            controller: ControllerKind::Sliding,
            feedforward: false,
            setpoint: Pose::default(),
            initial_offset: Pose::default(),
            wind: None,
            current: CurrentSpec::default(),
            gains: ControllerGains::default(),
            vehicle: VehicleParams::default(),
            wind_model: WindParams::default(),
            allocator: None,
        }
    }
}

impl Scenario {
    pub fn setpoint(&self) -> Setpoint {
        let eta = self.setpoint.to_vector();
        Setpoint::hold(eta[0], eta[1], eta[2])
    }

    pub fn initial_state(&self) -> VehicleState {
        VehicleState::new(self.setpoint.to_vector() + self.initial_offset.to_vector(), Vector3::zeros())
    }

    pub fn allocator_config(&self) -> AllocatorConfig {
        self.allocator.unwrap_or_else(|| AllocatorConfig::from_params(&self.vehicle))
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = |m: String| Error::config(format!("scenario '{}'", self.name), m);
        self.vehicle.validate()?;
        self.wind_model.validate()?;
        self.gains.validate()?;
        self.current.params().validate()?;
        self.allocator_config().validate()?;
        if let Some(w) = &self.wind {
            if w.trace_path.is_none() {
                if !(w.mean_speed_mps >= 0.0) {
                    return Err(ctx(format!("wind.mean_speed_mps must be >= 0, got {}", w.mean_speed_mps)));
                }
                if w.mean_speed_mps > 0.0 {
                    w.synthesis(700.0).validate().map_err(|e| ctx(e.to_string()))?;
                }
            }
        }
        let all = [self.setpoint.x_m, self.setpoint.y_m, self.setpoint.heading_deg, self.initial_offset.x_m, self.initial_offset.y_m, self.initial_offset.heading_deg];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(ctx("setpoint and offset must be finite".into()));
        }
        Ok(())
    }
}
