use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::{check_positive, diag, tracking_error, tracking_error_rate, Setpoint};
use crate::error::{Error, Result};
use crate::types::{VehicleState, Wrench};
use crate::vehicle::{rotation_matrix, rotation_matrix_rate, VehicleParams};

/// The three bandwidth candidates and the one used (the smallest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSelection {
    /// From the closed-loop rotational bandwidth `f_r`: `(2/3) pi f_r`.
    pub rotation: f64,
    /// From the control sampling rate `f_s`: `f_s / 5`.
    pub sampling: f64,
    /// From the actuator rise time `t_u`: `1 / (3 t_u)`.
    pub rise_time: f64,
    pub selected: f64,
}

pub fn select_lambda(f_r: f64, f_s: f64, t_u: f64) -> Result<LambdaSelection> {
    if !(f_r > 0.0 && f_s > 0.0 && t_u > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bandwidth inputs must be positive, got f_r={f_r}, f_s={f_s}, t_u={t_u}"
        )));
    }
    let rotation = 2.0 / 3.0 * PI * f_r;
    let sampling = f_s / 5.0;
    let rise_time = 1.0 / (3.0 * t_u);
    Ok(LambdaSelection { rotation, sampling, rise_time, selected: rotation.min(sampling).min(rise_time) })
}

/// Decoupled inertia, Coriolis and linear drag used inside the
/// model-based laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifiedModel {
    pub m_surge: f64,
    pub m_sway: f64,
    pub m_yaw: f64,
    pub d: Vector3<f64>,
}

impl SimplifiedModel {
    pub fn from_params(p: &VehicleParams) -> Self {
        let a = &p.added_mass;
        let l = &p.linear_drag;
        Self {
            m_surge: p.mass_kg - a.x_udot,
            m_sway: p.mass_kg - a.y_vdot,
            m_yaw: p.yaw_inertia_kgm2 - a.n_rdot,
            d: Vector3::new(l.x_u, l.y_v, l.n_r),
        }
    }

    pub fn mass(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(self.m_surge, self.m_sway, self.m_yaw))
    }

    pub fn coriolis(&self, nu: &Vector3<f64>) -> Matrix3<f64> {
        let (u, v) = (nu[0], nu[1]);
        let a = self.m_sway * v;
        let b = self.m_surge * u;
        Matrix3::new(0.0, 0.0, -a, 0.0, 0.0, b, a, -b, 0.0)
    }

    pub fn drag(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&self.d)
    }
}

/// Model term shared by the backstepping and sliding-mode laws:
/// `M1 (J^T eta_r'' + J'^T eta_r') + C1(nu) J^T eta_r' + D1 J^T eta_r'`.
pub fn model_compensation(
    model: &SimplifiedModel,
    state: &VehicleState,
    eta_r_dot: &Vector3<f64>,
    eta_r_ddot: &Vector3<f64>,
) -> Vector3<f64> {
    let psi = state.heading();
    let jt = rotation_matrix(psi).transpose();
    let j_dot_t = rotation_matrix_rate(psi, state.nu[2]).transpose();
    let nu_r = jt * eta_r_dot;
    model.mass() * (jt * eta_r_ddot + j_dot_t * eta_r_dot) + model.coriolis(&state.nu) * nu_r + model.drag() * nu_r
}

/// Bandwidth `lambda` plus diagonals of `K_d` and `K_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackstepGains {
    pub lambda: [f64; 3],
    pub kd: [f64; 3],
    pub kp: [f64; 3],
}

impl Default for BackstepGains {
    fn default() -> Self {
        let l = 1.0 / 6.0;
        Self { lambda: [l, l, l], kd: [150.0, 300.0, 300.0], kp: [20.0, 40.0, 80.0] }
    }
}

impl BackstepGains {
    pub fn validate(&self) -> Result<()> {
        check_positive("backstepping.lambda", self.lambda)?;
        check_positive("backstepping.kd", self.kd)?;
        check_positive("backstepping.kp", self.kp)
    }
}

pub fn backstepping_control(state: &VehicleState, sp: &Setpoint, gains: &BackstepGains, model: &SimplifiedModel) -> Wrench {
    let lambda = diag(gains.lambda);
    let (e, _) = tracking_error(state, sp);
    let e_dot = tracking_error_rate(state, sp);
    let eta_r_dot = sp.eta_dot - lambda * e;
    let eta_r_ddot = -lambda * e_dot;
    let s = e_dot + lambda * e;
    let jt = rotation_matrix(state.heading()).transpose();
    let tau = model_compensation(model, state, &eta_r_dot, &eta_r_ddot) - jt * (diag(gains.kd) * s) - jt * (diag(gains.kp) * e);
    Wrench::from_vector(&tau)
}
