use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{check_positive, diag, model_compensation, tracking_error, tracking_error_rate, Setpoint, SimplifiedModel};
use crate::error::{Error, Result};
use crate::types::{VehicleState, Wrench};
use crate::vehicle::rotation_matrix;

/// Unit saturation: identity inside `[-1, 1]`, sign outside.
pub fn sat(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlidingGains {
    pub lambda: [f64; 3],
    /// Uncertainty bound: the switching term never exceeds these magnitudes.
    pub r: [f64; 3],
    /// Boundary-layer thickness on the sliding surface.
    pub e: [f64; 3],
    /// Factor applied to the sway integral on each cycle after the
    /// allocator saturated.
    #[serde(default = "default_anti_windup")]
    pub anti_windup_scale: f64,
}

fn default_anti_windup() -> f64 {
    0.1
}

/// Per earth axis (north, east, yaw), found by searching in simulation for a
/// north-facing setpoint. The east axis is deliberately soft so that a
/// sideways load does not starve the yaw channel of thrust.
impl Default for SlidingGains {
    fn default() -> Self {
        Self {
            lambda: [0.15, 0.005, 0.075],
            r: [130.0, 28.0, 12.0],
            e: [0.2, 0.5, 0.05],
            anti_windup_scale: default_anti_windup(),
        }
    }
}

impl SlidingGains {
    pub fn validate(&self) -> Result<()> {
        check_positive("sliding.lambda", self.lambda)?;
        check_positive("sliding.r", self.r)?;
        check_positive("sliding.e", self.e)?;
        if !(0.0..=1.0).contains(&self.anti_windup_scale) {
            return Err(Error::InvalidParams(format!(
                "sliding.anti_windup_scale must lie in [0, 1], got {}",
                self.anti_windup_scale
            )));
        }
        Ok(())
    }
}

/// `s = e' + 2 lambda e + lambda^2 integral(e)`.
pub fn sliding_surface(e: &Vector3<f64>, e_dot: &Vector3<f64>, integral: &Vector3<f64>, lambda: [f64; 3]) -> Vector3<f64> {
    let l = diag(lambda);
    e_dot + 2.0 * l * e + l * l * integral
}

/// Sliding-mode law for a given error integral. Pure; [`SlidingMode`]
/// owns the integral between ticks.
pub fn sliding_mode_control(
    state: &VehicleState,
    sp: &Setpoint,
    gains: &SlidingGains,
    model: &SimplifiedModel,
    integral: &Vector3<f64>,
) -> Wrench {
    let l = diag(gains.lambda);
    let (e, _) = tracking_error(state, sp);
    let e_dot = tracking_error_rate(state, sp);
    let s = sliding_surface(&e, &e_dot, integral, gains.lambda);
    let eta_r_dot = sp.eta_dot - 2.0 * l * e - l * l * integral;
    let eta_r_ddot = -2.0 * l * e_dot - l * l * e;
    let switching = Vector3::from_fn(|i, _| gains.r[i] * sat(s[i] / gains.e[i]));
    let jt = rotation_matrix(state.heading()).transpose();
    Wrench::from_vector(&(model_compensation(model, state, &eta_r_dot, &eta_r_ddot) - jt * switching))
}

/// Sliding-mode controller with its error integral and anti-windup flag.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingMode {
    pub gains: SlidingGains,
    integral: Vector3<f64>,
    saturated: bool,
}

impl SlidingMode {
    pub fn new(gains: SlidingGains) -> Self {
        Self { gains, integral: Vector3::zeros(), saturated: false }
    }

    pub fn integral(&self) -> &Vector3<f64> {
        &self.integral
    }

    pub fn set_saturated(&mut self, saturated: bool) {
        self.saturated = saturated;
    }

    pub fn reset(&mut self) {
        self.integral = Vector3::zeros();
        self.saturated = false;
    }

    pub fn update(&mut self, state: &VehicleState, sp: &Setpoint, model: &SimplifiedModel, dt: f64) -> Wrench {
        let j = rotation_matrix(state.heading());
        if self.saturated {
            // shrink only the body-frame sway part of the stored integral
            let mut body = j.transpose() * self.integral;
            body[1] *= self.gains.anti_windup_scale;
            self.integral = j * body;
        }
        let (e, _) = tracking_error(state, sp);
        self.integral += e * dt;
        sliding_mode_control(state, sp, &self.gains, model, &self.integral)
    }
}
