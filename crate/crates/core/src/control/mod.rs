//! Station-keeping feedback laws. Every law returns the desired body-frame
//! [`Wrench`]; allocation to the thrusters happens downstream.
//!
//! Errors follow `eta_t = eta - eta_d` in the earth frame with the heading
//! component wrapped, and the earth-frame error rate is taken from the model,
//! `eta_t' = J(psi) nu - eta_d'`.

mod backstep;
mod pd;
mod sliding;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

pub use backstep::{backstepping_control, model_compensation, select_lambda, BackstepGains, LambdaSelection, SimplifiedModel};
pub use pd::{pd_control, PdGains};
pub use sliding::{sat, sliding_mode_control, sliding_surface, SlidingGains, SlidingMode};

use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::types::{VehicleState, Wrench};
use crate::vehicle::{rotation_matrix, VehicleParams};

/// Desired pose and its rate (zero when holding station).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Setpoint {
    pub eta: Vector3<f64>,
    #[serde(default)]
    pub eta_dot: Vector3<f64>,
}

impl Setpoint {
    pub fn hold(x: f64, y: f64, psi: f64) -> Self {
        Self { eta: Vector3::new(x, y, wrap_angle(psi)), eta_dot: Vector3::zeros() }
    }
}

/// Earth-frame error `eta_t` and its body-frame view `J(psi)^T eta_t`.
pub fn tracking_error(state: &VehicleState, sp: &Setpoint) -> (Vector3<f64>, Vector3<f64>) {
    let mut earth = state.eta - sp.eta;
    earth[2] = wrap_angle(earth[2]);
    let body = rotation_matrix(state.heading()).transpose() * earth;
    (earth, body)
}

/// Earth-frame error rate from the body velocity.
pub fn tracking_error_rate(state: &VehicleState, sp: &Setpoint) -> Vector3<f64> {
    rotation_matrix(state.heading()) * state.nu - sp.eta_dot
}

/// Subtracts the estimated wind load from the feedback output, so the
/// thrusters also work against the wind.
pub fn apply_feedforward(tau: Wrench, wind_estimate: Wrench) -> Wrench {
    tau - wind_estimate
}

pub(crate) fn diag(v: [f64; 3]) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::from(v))
}

pub(crate) fn check_positive(name: &str, v: [f64; 3]) -> Result<()> {
    if v.iter().all(|x| *x > 0.0 && x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} entries must be positive, got {v:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKind {
    Pd,
    Backstepping,
    Sliding,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 3] = [ControllerKind::Pd, ControllerKind::Backstepping, ControllerKind::Sliding];

    pub fn name(self) -> &'static str {
        match self {
            ControllerKind::Pd => "pd",
            ControllerKind::Backstepping => "backstepping",
            ControllerKind::Sliding => "sliding",
        }
    }
}

impl std::fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ControllerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pd" => Ok(ControllerKind::Pd),
            "backstepping" | "backstep" => Ok(ControllerKind::Backstepping),
            "sliding" | "smc" => Ok(ControllerKind::Sliding),
            other => Err(Error::InvalidArgument(format!("unknown controller '{other}'"))),
        }
    }
}

/// Gains for all three laws; the active one is picked by [`ControllerKind`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerGains {
    pub pd: PdGains,
    pub backstepping: BackstepGains,
    pub sliding: SlidingGains,
}

impl ControllerGains {
    pub fn validate(&self) -> Result<()> {
        self.pd.validate()?;
        self.backstepping.validate()?;
        self.sliding.validate()
    }
}

/// A configured law with whatever state it carries between control ticks.
#[derive(Debug, Clone)]
pub enum Controller {
    Pd(PdGains),
    Backstepping(BackstepGains, SimplifiedModel),
    Sliding(SlidingMode, SimplifiedModel),
}

impl Controller {
    pub fn new(kind: ControllerKind, gains: &ControllerGains, params: &VehicleParams) -> Result<Self> {
        Ok(match kind {
            ControllerKind::Pd => {
                gains.pd.validate()?;
                Controller::Pd(gains.pd)
            }
            ControllerKind::Backstepping => {
                gains.backstepping.validate()?;
                Controller::Backstepping(gains.backstepping, SimplifiedModel::from_params(params))
            }
            ControllerKind::Sliding => {
                gains.sliding.validate()?;
                Controller::Sliding(SlidingMode::new(gains.sliding), SimplifiedModel::from_params(params))
            }
        })
    }

    pub fn kind(&self) -> ControllerKind {
        match self {
            Controller::Pd(_) => ControllerKind::Pd,
            Controller::Backstepping(..) => ControllerKind::Backstepping,
            Controller::Sliding(..) => ControllerKind::Sliding,
        }
    }

    /// One control tick of length `dt`.
    pub fn compute(&mut self, state: &VehicleState, sp: &Setpoint, dt: f64) -> Wrench {
        match self {
            Controller::Pd(g) => pd_control(state, sp, g),
            Controller::Backstepping(g, m) => backstepping_control(state, sp, g, m),
            Controller::Sliding(s, m) => s.update(state, sp, m, dt),
        }
    }

    /// Tells stateful laws whether the allocator clamped the last command.
    pub fn report_saturation(&mut self, saturated: bool) {
        if let Controller::Sliding(s, _) = self {
            s.set_saturated(saturated);
        }
    }

    pub fn reset(&mut self) {
        if let Controller::Sliding(s, _) = self {
            s.reset();
        }
    }
}

#[cfg(test)]
mod tests;
