//! Thrust allocation for the two azimuthing thrusters.
//!
//! A desired wrench is split into per-side force vectors with the weighted
//! pseudoinverse of the actuator configuration matrix, converted to
//! thrust/azimuth pairs, folded into the reachable azimuth range, clamped to
//! the thrust envelope and finally smoothed by first-order filters.

use nalgebra::{DMatrix, Matrix3x4, Matrix4x3, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::types::{ThrusterSetpoint, Wrench};
use crate::vehicle::{thruster_arms, VehicleParams};

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AllocatorConfig {
    /// Thruster position `(l_x, l_y)` relative to the CG, port side.
    pub port_position_m: [f64; 2],
    pub starboard_position_m: [f64; 2],
    /// Diagonal of the weight matrix on `[F_xp, F_yp, F_xs, F_ys]`.
    pub weights: [f64; 4],
    pub max_azimuth_rad: f64,
    pub max_forward_n: f64,
    pub max_reverse_n: f64,
    pub thrust_time_constant_s: f64,
    pub azimuth_time_constant_s: f64,
}

impl AllocatorConfig {
    pub fn from_params(p: &VehicleParams) -> Self {
        let [port, starboard] = thruster_arms(p);
        Self {
            port_position_m: [port.0, port.1],
            starboard_position_m: [starboard.0, starboard.1],
            weights: [1.0; 4],
            max_azimuth_rad: p.max_azimuth_rad,
            max_forward_n: p.max_thrust_n,
            max_reverse_n: p.max_reverse_thrust_n,
            thrust_time_constant_s: 5.0,
            azimuth_time_constant_s: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.weights.iter().all(|w| *w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidParams(format!("allocation weights must be positive, got {:?}", self.weights)));
        }
        if !(self.max_azimuth_rad > 0.0 && self.max_azimuth_rad <= PI / 2.0) {
            return Err(Error::InvalidParams(format!("max azimuth must lie in (0, pi/2], got {}", self.max_azimuth_rad)));
        }
        if !(self.max_forward_n > 0.0) || !(self.max_reverse_n >= 0.0) {
            return Err(Error::InvalidParams("thrust limits must be positive".into()));
        }
        if !(self.thrust_time_constant_s > 0.0) || !(self.azimuth_time_constant_s > 0.0) {
            return Err(Error::InvalidParams("filter time constants must be positive".into()));
        }
        Ok(())
    }
}

impl Default for AllocatorConfig {
    fn default() -> Self {
        Self::from_params(&VehicleParams::default())
    }
}

/// Per-side force components `[F_xp, F_yp, F_xs, F_ys]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtendedThrust {
    pub port_x: f64,
    pub port_y: f64,
    pub starboard_x: f64,
    pub starboard_y: f64,
}

impl ExtendedThrust {
    pub fn from_vector(f: &Vector4<f64>) -> Self {
        Self { port_x: f[0], port_y: f[1], starboard_x: f[2], starboard_y: f[3] }
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.port_x, self.port_y, self.starboard_x, self.starboard_y)
    }

    /// `f^T W f`.
    pub fn weighted_norm_sq(&self, weights: &[f64; 4]) -> f64 {
        self.to_vector().iter().zip(weights).map(|(f, w)| w * f * f).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllocationResult {
    /// Unfiltered command after angle logic and clamping.
    pub setpoint: ThrusterSetpoint,
    pub raw: ExtendedThrust,
    /// A thrust magnitude hit its limit.
    pub saturated: bool,
    /// Demand fell in the unreachable azimuth band on `[port, starboard]`.
    pub zeroed: [bool; 2],
}

/// Configuration matrix for actuators at `(l_x, l_y)`, two columns per
/// actuator (`F_x`, `F_y`).
pub fn build_transformation(positions: &[(f64, f64)]) -> Result<DMatrix<f64>> {
    if positions.is_empty() {
        return Err(Error::InvalidArgument("at least one actuator is required".into()));
    }
    let mut t = DMatrix::zeros(3, 2 * positions.len());
    for (i, &(lx, ly)) in positions.iter().enumerate() {
        t[(0, 2 * i)] = 1.0;
        t[(1, 2 * i + 1)] = 1.0;
        t[(2, 2 * i)] = -ly;
        t[(2, 2 * i + 1)] = lx;
    }
    Ok(t)
}

/// `W^-1 T^T (T W^-1 T^T)^-1` for a diagonal weight `W`.
pub fn weighted_pseudoinverse(t: &DMatrix<f64>, weights: &[f64]) -> Result<DMatrix<f64>> {
    if weights.len() != t.ncols() || !weights.iter().all(|w| *w > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need {} positive weights, got {:?}",
            t.ncols(),
            weights
        )));
    }
    let w_inv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(weights.len(), weights.iter().map(|w| 1.0 / w)));
    let wt = &w_inv * t.transpose();
    let normal = t * &wt;
    // reject near-singular normal matrices relative to their scale
    let svd = normal.clone().svd(false, false);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if !(max > 0.0) || min <= max * 1e-12 {
        return Err(Error::DegenerateGeometry);
    }
    let inv = normal.try_inverse().ok_or(Error::DegenerateGeometry)?;
    Ok(wt * inv)
}

fn two_thruster_matrices(cfg: &AllocatorConfig) -> Result<(Matrix3x4<f64>, Matrix4x3<f64>)> {
    let positions = [
        (cfg.port_position_m[0], cfg.port_position_m[1]),
        (cfg.starboard_position_m[0], cfg.starboard_position_m[1]),
    ];
    let t = build_transformation(&positions)?;
    let pinv = weighted_pseudoinverse(&t, &cfg.weights)?;
    Ok((Matrix3x4::from_iterator(t.iter().copied()), Matrix4x3::from_iterator(pinv.iter().copied())))
}

/// Folds a raw azimuth into the reachable range. Returns
/// `(azimuth, thrust, zeroed)`: demands pointing aft are served by reversed
/// thrust, demands in the unreachable side band get zero thrust with the
/// azimuth parked at the nearest limit.
pub fn apply_angle_logic(delta: f64, thrust: f64, limit: f64) -> (f64, f64, bool) {
    let delta = wrap_angle(delta);
    let a = delta.abs();
    if a <= limit {
        (delta, thrust, false)
    } else if a >= PI - limit {
        let shifted = if delta > 0.0 { delta - PI } else { delta + PI };
        (shifted, -thrust, false)
    } else {
        (limit.copysign(delta), 0.0, true)
    }
}

/// First-order IIR step `y + (dt/tc)(target - y)`; the gain is capped at 1.
pub fn lowpass(previous: f64, target: f64, dt: f64, time_constant: f64) -> f64 {
    let k = (dt / time_constant).min(1.0);
    previous + k * (target - previous)
}

/// [`lowpass`] on an angle, taking the short way round.
pub fn lowpass_angle(previous: f64, target: f64, dt: f64, time_constant: f64) -> f64 {
    let k = (dt / time_constant).min(1.0);
    wrap_angle(previous + k * wrap_angle(target - previous))
}

const IDLE_FORCE: f64 = 1e-9;

fn side(fx: f64, fy: f64, hold: f64, cfg: &AllocatorConfig) -> (f64, f64, bool, bool) {
    let magnitude = fx.hypot(fy);
    if magnitude <= IDLE_FORCE {
        return (hold, 0.0, false, false);
    }
    let (az, thrust, zeroed) = apply_angle_logic(fy.atan2(fx), magnitude, cfg.max_azimuth_rad);
    let clamped = thrust.clamp(-cfg.max_reverse_n, cfg.max_forward_n);
    let saturated = thrust >= cfg.max_forward_n || -thrust >= cfg.max_reverse_n;
    (az, clamped, zeroed, saturated && thrust != 0.0)
}

/// Stateless allocation. `hold` gives the azimuths to keep on an idle side.
pub fn allocate_with(tau: &Wrench, cfg: &AllocatorConfig, pinv: &Matrix4x3<f64>, hold: [f64; 2]) -> AllocationResult {
    let f = pinv * tau.to_vector();
    let (port_az, port_t, port_zero, port_sat) = side(f[0], f[1], hold[0], cfg);
    let (stbd_az, stbd_t, stbd_zero, stbd_sat) = side(f[2], f[3], hold[1], cfg);
    AllocationResult {
        setpoint: ThrusterSetpoint {
            port_thrust: port_t,
            starboard_thrust: stbd_t,
            port_azimuth: port_az,
            starboard_azimuth: stbd_az,
        },
        raw: ExtendedThrust::from_vector(&f),
        saturated: port_sat || stbd_sat,
        zeroed: [port_zero, stbd_zero],
    }
}

pub fn allocate(tau: &Wrench, cfg: &AllocatorConfig) -> Result<AllocationResult> {
    let (_, pinv) = two_thruster_matrices(cfg)?;
    Ok(allocate_with(tau, cfg, &pinv, [0.0, 0.0]))
}

/// Allocation plus actuator filters, one instance per control loop.
#[derive(Debug, Clone)]
pub struct Allocator {
    cfg: AllocatorConfig,
    t: Matrix3x4<f64>,
    pinv: Matrix4x3<f64>,
    output: ThrusterSetpoint,
    last: Option<AllocationResult>,
}

impl Allocator {
    pub fn new(cfg: AllocatorConfig) -> Result<Self> {
        cfg.validate()?;
        let (t, pinv) = two_thruster_matrices(&cfg)?;
        Ok(Self { cfg, t, pinv, output: ThrusterSetpoint::IDLE, last: None })
    }

    pub fn config(&self) -> &AllocatorConfig {
        &self.cfg
    }

    pub fn transformation(&self) -> &Matrix3x4<f64> {
        &self.t
    }

    pub fn pseudoinverse(&self) -> &Matrix4x3<f64> {
        &self.pinv
    }

    /// Filtered command currently applied to the thrusters.
    pub fn output(&self) -> ThrusterSetpoint {
        self.output
    }

    pub fn last_result(&self) -> Option<&AllocationResult> {
        self.last.as_ref()
    }

    pub fn reset(&mut self) {
        self.output = ThrusterSetpoint::IDLE;
        self.last = None;
    }

    /// Allocates `tau` and advances the filters by `dt`. Returns the
    /// unfiltered allocation; the filtered command is in [`Self::output`].
    pub fn step(&mut self, tau: &Wrench, dt: f64) -> AllocationResult {
        let hold = [self.output.port_azimuth, self.output.starboard_azimuth];
        let res = allocate_with(tau, &self.cfg, &self.pinv, hold);
        let (ta, tt) = (self.cfg.azimuth_time_constant_s, self.cfg.thrust_time_constant_s);
        let o = &mut self.output;
        o.port_azimuth = lowpass_angle(o.port_azimuth, res.setpoint.port_azimuth, dt, ta);
        o.starboard_azimuth = lowpass_angle(o.starboard_azimuth, res.setpoint.starboard_azimuth, dt, ta);
        o.port_thrust = lowpass(o.port_thrust, res.setpoint.port_thrust, dt, tt);
        o.starboard_thrust = lowpass(o.starboard_thrust, res.setpoint.starboard_thrust, dt, tt);
        self.last = Some(res);
        res
    }
}

/// Unit vector spanning the null space of a full-rank 3x4 matrix.
pub fn null_direction(t: &Matrix3x4<f64>) -> Vector4<f64> {
    // cofactor expansion: components are signed 3x3 minors
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|c| *c != skip).collect();
        let m = nalgebra::Matrix3::from_fn(|r, c| t[(r, cols[c])]);
        m.determinant()
    };
    let n = Vector4::new(minor(0), -minor(1), minor(2), -minor(3));
    n / n.norm()
}

/// Wrench produced by extended forces `f`.
pub fn extended_wrench(t: &Matrix3x4<f64>, f: &ExtendedThrust) -> Wrench {
    let v: Vector3<f64> = t * f.to_vector();
    Wrench::from_vector(&v)
}
