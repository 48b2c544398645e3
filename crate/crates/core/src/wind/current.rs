use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::types::{VehicleState, Wrench};
use crate::vehicle::{drag_wrench, rotation_matrix, VehicleParams};

/// Uniform water current. `direction` is the earth-frame heading the water
/// flows toward. A non-zero `modulation_period_s` adds a slow sinusoid of
/// amplitude `modulation_amplitude` to the speed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurrentParams {
    pub speed: f64,
    pub direction: f64,
    pub modulation_amplitude: f64,
    pub modulation_period_s: f64,
}

impl CurrentParams {
    pub fn constant(speed: f64, direction: f64) -> Self {
        Self { speed, direction, ..Self::default() }
    }

    pub fn speed_at(&self, t: f64) -> f64 {
        let wobble = if self.modulation_period_s > 0.0 {
            self.modulation_amplitude * (2.0 * PI * t / self.modulation_period_s).sin()
        } else {
            0.0
        };
        (self.speed + wobble).max(0.0)
    }

    /// Water velocity in the body frame `[u_c, v_c, 0]`.
    pub fn body_velocity(&self, t: f64, heading: f64) -> Vector3<f64> {
        let speed = self.speed_at(t);
        let earth = Vector3::new(speed * self.direction.cos(), speed * self.direction.sin(), 0.0);
        rotation_matrix(heading).transpose() * earth
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.speed >= 0.0) || !self.direction.is_finite() {
            return Err(crate::Error::InvalidParams(format!(
                "current speed must be >= 0 and direction finite, got {} / {}",
                self.speed, self.direction
            )));
        }
        if !(self.modulation_period_s >= 0.0) || !self.modulation_amplitude.is_finite() {
            return Err(crate::Error::InvalidParams("current modulation must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Linear drag on the flow past the hull, pushing it along with the water.
/// Vanishes when the vehicle drifts with the current.
pub fn current_wrench(cp: &CurrentParams, t: f64, state: &VehicleState, params: &VehicleParams) -> Wrench {
    let water = cp.body_velocity(t, state.heading());
    let du = water[0] - state.nu[0];
    let dv = water[1] - state.nu[1];
    let d = &params.linear_drag;
    Wrench::new(d.x_u * du, d.y_v * dv, d.n_v * dv)
}

/// Load the simulator applies for a current: the full hull drag evaluated on
/// the flow relative to the water instead of over ground, expressed as a
/// correction to the over-ground drag. Zero in still water.
pub fn current_load(cp: &CurrentParams, t: f64, state: &VehicleState, params: &VehicleParams) -> Wrench {
    let water = cp.body_velocity(t, state.heading());
    if water == Vector3::zeros() {
        return Wrench::ZERO;
    }
    drag_wrench(params, &state.nu) - drag_wrench(params, &(state.nu - water))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn calm_water_at_rest() {
        let p = VehicleParams::default();
        let w = current_wrench(&CurrentParams::default(), 0.0, &VehicleState::at_rest(0.0, 0.0, 0.3), &p);
        assert_eq!(w, Wrench::ZERO);
    }

    #[test]
    fn drifting_with_the_current() {
        let p = VehicleParams::default();
        let cp = CurrentParams::constant(0.2, 1.1);
        let psi = 0.4;
        let nu = cp.body_velocity(0.0, psi);
        let state = VehicleState::new(Vector3::new(0.0, 0.0, psi), nu);
        assert!(current_wrench(&cp, 0.0, &state, &p).max_abs_diff(&Wrench::ZERO) < 1e-12);
    }

    #[test]
    fn beam_current_pushes_to_leeward() {
        let p = VehicleParams::default();
        // heading north, water flowing east: starboard beam-on
        let cp = CurrentParams::constant(0.2, FRAC_PI_2);
        let w = current_wrench(&cp, 0.0, &VehicleState::at_rest(0.0, 0.0, 0.0), &p);
        assert_abs_diff_eq!(w.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.y, p.linear_drag.y_v.abs() * 0.2, epsilon = 1e-12);
        assert!(w.y > 0.0);
    }

    #[test]
    fn modulation() {
        let cp = CurrentParams { speed: 0.2, direction: 0.0, modulation_amplitude: 0.1, modulation_period_s: 100.0 };
        assert_abs_diff_eq!(cp.speed_at(25.0), 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(cp.speed_at(75.0), 0.1, epsilon = 1e-12);
        let big = CurrentParams { modulation_amplitude: 0.5, ..cp };
        assert_eq!(big.speed_at(75.0), 0.0);
    }

    #[test]
    fn load_is_zero_in_still_water_and_relative_when_drifting() {
        let p = VehicleParams::default();
        let moving = VehicleState::new(Vector3::zeros(), Vector3::new(0.8, -0.2, 0.1));
        assert_eq!(current_load(&CurrentParams::default(), 0.0, &moving, &p), Wrench::ZERO);

        let cp = CurrentParams::constant(0.2, FRAC_PI_2);
        let drifting = VehicleState::new(Vector3::zeros(), Vector3::new(0.0, 0.2, 0.0));
        let total = drag_wrench(&p, &drifting.nu) - current_load(&cp, 0.0, &drifting, &p);
        assert_abs_diff_eq!(total.to_vector().norm(), 0.0, epsilon = 1e-12);

        // at rest the linear part is the plain current wrench
        let rest = VehicleState::at_rest(0.0, 0.0, 0.0);
        let load = current_load(&cp, 0.0, &rest, &p);
        let lin = current_wrench(&cp, 0.0, &rest, &p);
        assert_abs_diff_eq!(load.y, lin.y + p.quadratic_drag.y_vv * 0.04, epsilon = 1e-9);
    }
}
