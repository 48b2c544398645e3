//! Wind loads, apparent/true wind conversion, turbulence statistics, the
//! anemometer filter, synthetic wind and the water-current disturbance.
//!
//! Angle conventions:
//!
//! - `TrueWind::direction` is the earth-frame direction the wind blows
//!   *from* (meteorological convention), so the body-frame components
//!   `u_w = V cos(beta - psi)`, `v_w = V sin(beta - psi)` point toward the
//!   source.
//! - The apparent angle of attack is `gamma = -atan2(v_rw, u_rw)`. At
//!   `gamma = 0` the wind comes from dead ahead and pushes the hull aft,
//!   `C_x(0) = -c_x`.

mod current;
mod filter;
mod synth;
mod trace;
mod turbulence;

use serde::{Deserialize, Serialize};

pub use current::{current_load, current_wrench, CurrentParams};
pub use filter::{anemometer_filter, MovingAverage, ANEMOMETER_SPAN};
pub use synth::{synthesize_wind, WindSynthesis, LOW_BAND_SHARE};
pub use trace::{read_wind_csv, read_wind_trace, write_wind_csv, write_wind_trace, WIND_CSV_HEADER};
pub use turbulence::{periodogram, turbulence_stats, PsdWindow, TurbulenceStats};

use crate::angle::wrap_angle;
use crate::types::{VehicleState, Wrench};

/// Air density, projected windage areas and the horizontal-plane load
/// coefficients.
///
/// The windage areas and lever are rough projections of the hull and payload
/// tray, not measured values; override them when better data is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindParams {
    pub air_density_kgm3: f64,
    pub frontal_area_m2: f64,
    pub lateral_area_m2: f64,
    pub lateral_lever_m: f64,
    pub c_x: f64,
    pub c_y: f64,
    pub c_z: f64,
}

impl Default for WindParams {
    fn default() -> Self {
        Self {
            air_density_kgm3: 1.2,
            frontal_area_m2: 1.2,
            lateral_area_m2: 2.4,
            lateral_lever_m: 0.5,
            c_x: 0.50,
            c_y: 0.50,
            c_z: 0.33,
        }
    }
}

impl WindParams {
    /// Coefficients outside the usual ranges for xz-symmetric hulls. Tuned
    /// values may legitimately fall outside, so these are advisory.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, value, lo, hi) in [
            ("c_x", self.c_x, 0.5, 0.90),
            ("c_y", self.c_y, 0.7, 0.95),
            ("c_z", self.c_z, 0.05, 0.20),
        ] {
            if !(lo..=hi).contains(&value) {
                out.push(format!("{name} = {value} is outside the advised range [{lo}, {hi}]"));
            }
        }
        out
    }

    pub fn validate(&self) -> crate::Result<()> {
        for (name, value) in [
            ("air_density_kgm3", self.air_density_kgm3),
            ("frontal_area_m2", self.frontal_area_m2),
            ("lateral_area_m2", self.lateral_area_m2),
        ] {
            if !(value > 0.0) {
                return Err(crate::Error::InvalidParams(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

/// Apparent wind seen from the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WindSample {
    pub t: f64,
    /// Apparent speed `V_rw` (m/s).
    pub speed: f64,
    /// Apparent angle of attack `gamma_rw` (rad, (-pi, pi]).
    pub angle: f64,
}

/// Earth-frame wind.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrueWind {
    pub speed: f64,
    /// Direction the wind blows from (rad, earth frame).
    pub direction: f64,
}

/// A timestamped [`TrueWind`], the unit of synthetic and replayed traces.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrueWindSample {
    pub t: f64,
    pub wind: TrueWind,
}

pub fn wind_coefficients(wp: &WindParams, gamma: f64) -> (f64, f64, f64) {
    (-wp.c_x * gamma.cos(), wp.c_y * gamma.sin(), wp.c_z * (2.0 * gamma).sin())
}

pub fn dynamic_pressure(wp: &WindParams, speed: f64) -> f64 {
    0.5 * wp.air_density_kgm3 * speed * speed
}

/// Wind force and moment on the hull for an apparent wind sample.
pub fn wind_wrench(wp: &WindParams, sample: &WindSample) -> Wrench {
    let q = dynamic_pressure(wp, sample.speed);
    let (cx, cy, cn) = wind_coefficients(wp, sample.angle);
    Wrench::new(
        q * cx * wp.frontal_area_m2,
        q * cy * wp.lateral_area_m2,
        q * cn * wp.lateral_area_m2 * wp.lateral_lever_m,
    )
}

/// Body-frame relative wind components `(u_rw, v_rw)`.
pub fn relative_wind_components(true_wind: &TrueWind, state: &VehicleState) -> (f64, f64) {
    let rel = true_wind.direction - state.heading();
    let u_w = true_wind.speed * rel.cos();
    let v_w = true_wind.speed * rel.sin();
    (u_w - state.nu[0], v_w - state.nu[1])
}

/// Apparent angle of attack for relative components; defined as 0 in calm.
pub fn angle_of_attack(u_rw: f64, v_rw: f64) -> f64 {
    if u_rw == 0.0 && v_rw == 0.0 {
        0.0
    } else {
        wrap_angle(-v_rw.atan2(u_rw))
    }
}

pub fn apparent_from_true(t: f64, true_wind: &TrueWind, state: &VehicleState) -> WindSample {
    let (u_rw, v_rw) = relative_wind_components(true_wind, state);
    WindSample { t, speed: u_rw.hypot(v_rw), angle: angle_of_attack(u_rw, v_rw) }
}

/// Inverse of [`apparent_from_true`] given the vehicle pose and velocity.
pub fn true_from_apparent(sample: &WindSample, state: &VehicleState) -> TrueWind {
    let u_rw = sample.speed * sample.angle.cos();
    let v_rw = -sample.speed * sample.angle.sin();
    let u_w = u_rw + state.nu[0];
    let v_w = v_rw + state.nu[1];
    let direction = if u_w == 0.0 && v_w == 0.0 { state.heading() } else { v_w.atan2(u_w) + state.heading() };
    TrueWind { speed: u_w.hypot(v_w), direction: wrap_angle(direction) }
}
