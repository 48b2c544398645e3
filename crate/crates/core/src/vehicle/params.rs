use serde::{Deserialize, Serialize};

use super::hydro::{estimate_hydro_coefficients, HullGeometry, HydroCoefficients};
use crate::error::{Error, Result};

/// Added-mass derivatives in SNAME notation. Stored with the usual negative
/// sign so that `M = M_RB - M_A` gains inertia (e.g. `m - x_udot`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddedMass {
    pub x_udot: f64,
    pub y_vdot: f64,
    pub y_rdot: f64,
    pub n_vdot: f64,
    pub n_rdot: f64,
}

/// Linear drag, stored as positive dissipation: `D_l * nu` sits on the left
/// of the equations of motion and opposes motion.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearDrag {
    pub x_u: f64,
    pub y_v: f64,
    pub y_r: f64,
    pub n_v: f64,
    pub n_r: f64,
}

/// Quadratic (modulus) drag terms, same sign convention as [`LinearDrag`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticDrag {
    pub x_uu: f64,
    pub y_vv: f64,
    pub y_vr: f64,
    pub y_rv: f64,
    pub y_rr: f64,
    pub n_vv: f64,
    pub n_vr: f64,
    pub n_rv: f64,
    pub n_rr: f64,
}

/// Surge drag split from the bollard-pull / acceleration calibration: total
/// drag balances full bollard thrust (254 N) at 1.5 m/s with 20 % linear share.
pub const DEFAULT_X_U: f64 = 33.9;
pub const DEFAULT_X_UU: f64 = 90.3;

/// Geometry, inertia, hydrodynamic coefficients and actuator limits of the
/// twin-hull vehicle. All quantities are SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleParams {
    pub mass_kg: f64,
    pub yaw_inertia_kgm2: f64,
    pub x_g_m: f64,
    pub y_g_m: f64,
    pub length_overall_m: f64,
    pub waterline_length_m: f64,
    pub draft_m: f64,
    pub hull_beam_m: f64,
    /// Centerline-to-centerline hull separation `B`.
    pub hull_separation_m: f64,
    /// Longitudinal CG measured forward of the thruster pods.
    pub lcg_m: f64,
    pub water_density_kgm3: f64,
    pub added_mass: AddedMass,
    pub linear_drag: LinearDrag,
    pub quadratic_drag: QuadraticDrag,
    /// Forward thrust limit per thruster.
    pub max_thrust_n: f64,
    /// Reverse thrust limit per thruster (magnitude).
    pub max_reverse_thrust_n: f64,
    pub max_azimuth_rad: f64,
}

impl VehicleParams {
    /// Principal characteristics of the 16 ft WAM-V with no hydrodynamic
    /// coefficients filled in.
    pub fn wamv16_geometry() -> Self {
        Self {
            mass_kg: 180.0,
            yaw_inertia_kgm2: 250.0,
            x_g_m: 0.0,
            y_g_m: 0.0,
            length_overall_m: 4.05,
            waterline_length_m: 3.20,
            draft_m: 0.23,
            // beam overall (2.44) minus centerline separation (1.83)
            hull_beam_m: 0.61,
            hull_separation_m: 1.83,
            lcg_m: 1.30,
            water_density_kgm3: 1025.0,
            added_mass: AddedMass::default(),
            linear_drag: LinearDrag::default(),
            quadratic_drag: QuadraticDrag::default(),
            max_thrust_n: 127.0,
            max_reverse_thrust_n: 51.0,
            max_azimuth_rad: std::f64::consts::FRAC_PI_4,
        }
    }

    pub fn hull_geometry(&self) -> HullGeometry {
        HullGeometry {
            mass: self.mass_kg,
            length: self.waterline_length_m,
            draft: self.draft_m,
            hull_beam: self.hull_beam_m,
            hull_separation: self.hull_separation_m,
            lcg: self.lcg_m,
        }
    }

    /// Installs tabulated coefficient estimates, converting them to this
    /// type's sign convention (added mass negative, drag positive). Rows the
    /// table does not cover are zeroed; the surge drag fit is kept.
    pub fn with_coefficients(mut self, c: &HydroCoefficients) -> Self {
        self.added_mass = AddedMass {
            x_udot: -c.x_udot.abs(),
            y_vdot: -c.y_vdot.abs(),
            y_rdot: -c.y_rdot.abs(),
            n_vdot: -c.n_vdot.abs(),
            n_rdot: -c.n_rdot.abs(),
        };
        self.linear_drag = LinearDrag {
            x_u: self.linear_drag.x_u,
            y_v: c.y_v.abs(),
            y_r: c.y_r.abs(),
            n_v: 0.0,
            n_r: c.n_r.abs(),
        };
        self.quadratic_drag = QuadraticDrag { x_uu: self.quadratic_drag.x_uu, ..Default::default() };
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass_kg", self.mass_kg),
            ("yaw_inertia_kgm2", self.yaw_inertia_kgm2),
            ("max_thrust_n", self.max_thrust_n),
            ("water_density_kgm3", self.water_density_kgm3),
            ("hull_separation_m", self.hull_separation_m),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.max_reverse_thrust_n >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "max_reverse_thrust_n must be non-negative, got {}",
                self.max_reverse_thrust_n
            )));
        }
        let limit = self.max_azimuth_rad;
        if !(limit > 0.0 && limit <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParams(format!("max_azimuth_rad must lie in (0, pi/2], got {limit}")));
        }
        let d = &self.linear_drag;
        if d.x_u < 0.0 || d.y_v < 0.0 || d.n_r < 0.0 || self.quadratic_drag.x_uu < 0.0 {
            return Err(Error::InvalidParams(
                "diagonal drag coefficients must be non-negative (dissipative)".into(),
            ));
        }
        Ok(())
    }
}

impl Default for VehicleParams {
    /// WAM-V 16 geometry with tabulated coefficients evaluated at 1 m/s and
    /// the calibrated surge drag fit.
    fn default() -> Self {
        let mut base = Self::wamv16_geometry();
        base.linear_drag.x_u = DEFAULT_X_U;
        base.quadratic_drag.x_uu = DEFAULT_X_UU;
        let coeffs = estimate_hydro_coefficients(&base.hull_geometry(), base.water_density_kgm3, 1.0)
            .expect("built-in geometry is valid");
        base.with_coefficients(&coeffs)
    }
}
