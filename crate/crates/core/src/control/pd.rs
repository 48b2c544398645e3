use serde::{Deserialize, Serialize};

use super::{check_positive, diag, tracking_error, tracking_error_rate, Setpoint};
use crate::error::Result;
use crate::types::{VehicleState, Wrench};
use crate::vehicle::{rotation_matrix, rotation_matrix_rate};

/// Diagonals of the proportional and derivative gain matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdGains {
    pub kp: [f64; 3],
    pub kd: [f64; 3],
}

impl Default for PdGains {
    fn default() -> Self {
        Self { kp: [40.0, 60.0, 150.0], kd: [200.0, 500.0, 400.0] }
    }
}

impl PdGains {
    pub fn validate(&self) -> Result<()> {
        check_positive("pd.kp", self.kp)?;
        check_positive("pd.kd", self.kd)
    }
}

/// Nonlinear PD law `-Kp J^T e - Kd (J'^T e + J^T e')`.
pub fn pd_control(state: &VehicleState, sp: &Setpoint, gains: &PdGains) -> Wrench {
    let psi = state.heading();
    let j = rotation_matrix(psi);
    let j_dot = rotation_matrix_rate(psi, state.nu[2]);
    let (e, _) = tracking_error(state, sp);
    let e_dot = tracking_error_rate(state, sp);
    let tau = -diag(gains.kp) * j.transpose() * e - diag(gains.kd) * (j_dot.transpose() * e + j.transpose() * e_dot);
    Wrench::from_vector(&tau)
}
