//! Value types shared by the dynamics, control, allocation and simulation layers.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;

/// Generalized planar force `[X, Y, N]` in the body frame (N, N, N·m).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wrench {
    pub x: f64,
    pub y: f64,
    pub n: f64,
}

impl Wrench {
    pub const ZERO: Wrench = Wrench { x: 0.0, y: 0.0, n: 0.0 };

    pub const fn new(x: f64, y: f64, n: f64) -> Self {
        Self { x, y, n }
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.n)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.n.is_finite()
    }

    pub fn max_abs_diff(&self, other: &Wrench) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.n - other.n).abs())
    }
}

impl Add for Wrench {
    type Output = Wrench;
    fn add(self, rhs: Wrench) -> Wrench {
        Wrench::new(self.x + rhs.x, self.y + rhs.y, self.n + rhs.n)
    }
}

impl AddAssign for Wrench {
    fn add_assign(&mut self, rhs: Wrench) {
        *self = *self + rhs;
    }
}

impl Sub for Wrench {
    type Output = Wrench;
    fn sub(self, rhs: Wrench) -> Wrench {
        Wrench::new(self.x - rhs.x, self.y - rhs.y, self.n - rhs.n)
    }
}

impl Neg for Wrench {
    type Output = Wrench;
    fn neg(self) -> Wrench {
        Wrench::new(-self.x, -self.y, -self.n)
    }
}

impl Mul<f64> for Wrench {
    type Output = Wrench;
    fn mul(self, k: f64) -> Wrench {
        Wrench::new(self.x * k, self.y * k, self.n * k)
    }
}

/// Earth-frame pose `eta = [x North, y East, psi]` and body-frame velocity
/// `nu = [u surge, v sway, r yaw rate]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicleState {
    pub eta: Vector3<f64>,
    pub nu: Vector3<f64>,
}

impl VehicleState {
    pub fn new(eta: Vector3<f64>, nu: Vector3<f64>) -> Self {
        let mut s = Self { eta, nu };
        s.normalize();
        s
    }

    pub fn at_rest(x: f64, y: f64, psi: f64) -> Self {
        Self::new(Vector3::new(x, y, psi), Vector3::zeros())
    }

    pub fn heading(&self) -> f64 {
        self.eta[2]
    }

    pub fn normalize(&mut self) {
        self.eta[2] = wrap_angle(self.eta[2]);
    }

    pub fn is_finite(&self) -> bool {
        self.eta.iter().chain(self.nu.iter()).all(|v| v.is_finite())
    }
}

/// Per-side thrust (signed, N) and azimuth (rad) of the two azimuthing thrusters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThrusterSetpoint {
    pub port_thrust: f64,
    pub starboard_thrust: f64,
    pub port_azimuth: f64,
    pub starboard_azimuth: f64,
}

impl ThrusterSetpoint {
    pub const IDLE: ThrusterSetpoint = ThrusterSetpoint {
        port_thrust: 0.0,
        starboard_thrust: 0.0,
        port_azimuth: 0.0,
        starboard_azimuth: 0.0,
    };

    pub fn straight(port_thrust: f64, starboard_thrust: f64) -> Self {
        Self { port_thrust, starboard_thrust, ..Self::IDLE }
    }

    /// Checks the actuator envelope with a small slack for filter round-off.
    pub fn within_limits(&self, max_azimuth: f64, max_forward: f64, max_reverse: f64) -> bool {
        const SLACK: f64 = 1e-9;
        let thrust_ok = |t: f64| t <= max_forward + SLACK && -t <= max_reverse + SLACK;
        self.port_azimuth.abs() <= max_azimuth + SLACK
            && self.starboard_azimuth.abs() <= max_azimuth + SLACK
            && thrust_ok(self.port_thrust)
            && thrust_ok(self.starboard_thrust)
    }
}
