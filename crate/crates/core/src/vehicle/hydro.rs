//! Semi-empirical hydrodynamic coefficient estimates for a twin pontoon hull.
//!
//! Each coefficient is a non-dimensional factor times a dimensional term built
//! from hull geometry. Speed-dependent rows are linearized at a nominal surge
//! speed. Coefficients are returned in signed SNAME form; everything not
//! listed is zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default value of the constant in the end-plate term of `N_rdot`.
pub const N_RDOT_END_CONSTANT: f64 = 4.75 / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HullGeometry {
    pub mass: f64,
    /// Length used in the hydrodynamic formulas (waterline length by default).
    pub length: f64,
    pub draft: f64,
    pub hull_beam: f64,
    pub hull_separation: f64,
    pub lcg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydroCoefficients {
    pub x_udot: f64,
    pub y_vdot: f64,
    pub n_rdot: f64,
    pub y_rdot: f64,
    pub n_vdot: f64,
    pub y_v: f64,
    pub n_r: f64,
    pub y_r: f64,
}

pub fn estimate_hydro_coefficients(
    geometry: &HullGeometry,
    rho: f64,
    nominal_speed: f64,
) -> Result<HydroCoefficients> {
    estimate_hydro_coefficients_with(geometry, rho, nominal_speed, N_RDOT_END_CONSTANT)
}

pub fn estimate_hydro_coefficients_with(
    geometry: &HullGeometry,
    rho: f64,
    nominal_speed: f64,
    n_rdot_end_constant: f64,
) -> Result<HydroCoefficients> {
    let HullGeometry { mass, length: l, draft: t, hull_beam, hull_separation: b, lcg } = *geometry;
    for (name, value) in [("draft", t), ("length", l), ("hull beam", hull_beam), ("density", rho)] {
        if !(value > 0.0) {
            return Err(Error::InvalidParams(format!("{name} must be positive, got {value}")));
        }
    }
    if !(mass > 0.0) {
        return Err(Error::InvalidParams(format!("mass must be positive, got {mass}")));
    }
    if !(nominal_speed >= 0.0) {
        return Err(Error::InvalidParams(format!("nominal speed must be non-negative, got {nominal_speed}")));
    }

    let aft = l - lcg;
    let strip = PI * rho * t * t;
    let first_moment = (aft.powi(2) + lcg.powi(2)) / 2.0;
    let second_moment = (aft.powi(3) + lcg.powi(3)) / 3.0;

    let n_rdot_term = n_rdot_end_constant * PI * rho * (b / 2.0) * t.powi(4) + strip * second_moment;

    let bt = hull_beam / t;
    let crossflow = 1.1 + 0.0045 * (l / t) - 0.1 * bt + 0.016 * bt * bt;
    let y_v_term = rho * nominal_speed * crossflow * (PI * t * l / 2.0);

    Ok(HydroCoefficients {
        x_udot: -0.05 * mass,
        y_vdot: 0.9 * strip * l,
        n_rdot: 1.2 * n_rdot_term,
        y_rdot: 0.5 * strip * first_moment,
        n_vdot: 0.5 * strip * first_moment,
        y_v: -0.5 * y_v_term,
        n_r: -0.65 * strip * nominal_speed * l * l,
        y_r: -0.4 * strip * nominal_speed * l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vehicle::VehicleParams;

    fn geometry() -> HullGeometry {
        VehicleParams::wamv16_geometry().hull_geometry()
    }

    #[test]
    fn surge_added_mass_is_five_percent_of_mass() {
        let c = estimate_hydro_coefficients(&geometry(), 1025.0, 1.0).unwrap();
        assert!((c.x_udot + 9.0).abs() < 1e-12);
    }

    #[test]
    fn sway_added_mass_matches_strip_formula() {
        // 0.9 * pi * rho * T^2 * L with T = 0.23, L = LWL = 3.20, rho = 1025
        let expected = 0.9 * PI * 1025.0 * 0.23 * 0.23 * 3.20;
        let c = estimate_hydro_coefficients(&geometry(), 1025.0, 1.0).unwrap();
        assert!((c.y_vdot - expected).abs() < 1e-9);
        assert!((c.y_vdot - 490.59).abs() < 0.01, "{}", c.y_vdot);
    }

    #[test]
    fn zero_speed_removes_velocity_rows() {
        let c = estimate_hydro_coefficients(&geometry(), 1025.0, 0.0).unwrap();
        assert_eq!(c.n_r, 0.0);
        assert_eq!(c.y_r, 0.0);
        assert_eq!(c.y_v, 0.0);
        assert!(c.n_rdot > 0.0);
    }

    #[test]
    fn velocity_rows_scale_linearly_with_speed() {
        let one = estimate_hydro_coefficients(&geometry(), 1025.0, 1.0).unwrap();
        let two = estimate_hydro_coefficients(&geometry(), 1025.0, 2.0).unwrap();
        assert!((two.n_r - 2.0 * one.n_r).abs() < 1e-9);
        assert!((two.y_v - 2.0 * one.y_v).abs() < 1e-9);
        assert_eq!(two.y_vdot, one.y_vdot);
    }

    #[test]
    fn rejects_bad_geometry() {
        let mut g = geometry();
        g.draft = 0.0;
        assert!(estimate_hydro_coefficients(&g, 1025.0, 1.0).is_err());
        let mut g = geometry();
        g.length = -1.0;
        assert!(estimate_hydro_coefficients(&g, 1025.0, 1.0).is_err());
    }

    #[test]
    fn end_constant_is_configurable() {
        let a = estimate_hydro_coefficients_with(&geometry(), 1025.0, 1.0, N_RDOT_END_CONSTANT).unwrap();
        let b = estimate_hydro_coefficients_with(&geometry(), 1025.0, 1.0, 4.75).unwrap();
        let extra = 1.2 * N_RDOT_END_CONSTANT * PI * 1025.0 * (1.83 / 2.0) * 0.23f64.powi(4);
        assert!((b.n_rdot - a.n_rdot - extra).abs() < 1e-9);
    }
}
