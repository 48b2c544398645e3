use nalgebra::{Matrix3, Vector3};

use super::params::VehicleParams;
use crate::error::{Error, Result};
use crate::types::{ThrusterSetpoint, VehicleState, Wrench};

/// Body-to-earth transformation `J(psi)`.
pub fn rotation_matrix(psi: f64) -> Matrix3<f64> {
    let (s, c) = psi.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Time derivative of `J(psi)` for yaw rate `r`.
pub fn rotation_matrix_rate(psi: f64, r: f64) -> Matrix3<f64> {
    let (s, c) = psi.sin_cos();
    Matrix3::new(-s * r, -c * r, 0.0, c * r, -s * r, 0.0, 0.0, 0.0, 0.0)
}

/// Rigid-body plus added-mass inertia matrix.
pub fn mass_matrix(p: &VehicleParams) -> Result<Matrix3<f64>> {
    if !(p.mass_kg > 0.0) || !(p.yaw_inertia_kgm2 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "mass ({}) and yaw inertia ({}) must be positive",
            p.mass_kg, p.yaw_inertia_kgm2
        )));
    }
    let m = p.mass_kg;
    let a = &p.added_mass;
    Ok(Matrix3::new(
        m - a.x_udot,
        0.0,
        -m * p.y_g_m,
        0.0,
        m - a.y_vdot,
        m * p.x_g_m - a.y_rdot,
        -m * p.y_g_m,
        m * p.x_g_m - a.n_vdot,
        p.yaw_inertia_kgm2 - a.n_rdot,
    ))
}

/// Rigid-body plus added-mass Coriolis/centripetal matrix `C(nu)`.
pub fn coriolis_matrix(p: &VehicleParams, nu: &Vector3<f64>) -> Matrix3<f64> {
    let (u, v, r) = (nu[0], nu[1], nu[2]);
    let m = p.mass_kg;
    let a = &p.added_mass;

    let rb13 = -m * (p.x_g_m * r + v);
    let rb23 = -m * (p.y_g_m * r - u);
    let am13 = a.y_vdot * v + 0.5 * (a.y_rdot + a.n_vdot) * r;
    let am23 = -a.x_udot * u;

    Matrix3::new(
        0.0,
        0.0,
        rb13 + am13,
        0.0,
        0.0,
        rb23 + am23,
        -rb13 - am13,
        -rb23 - am23,
        0.0,
    )
}

/// Per-hull surge velocities `(port, starboard)` for body velocity `nu`.
pub fn hull_surge_velocities(p: &VehicleParams, nu: &Vector3<f64>) -> (f64, f64) {
    let half = p.hull_separation_m / 2.0;
    (nu[0] - nu[2] * half, nu[0] + nu[2] * half)
}

fn hull_drag(p: &VehicleParams, u_hull: f64) -> f64 {
    0.5 * p.quadratic_drag.x_uu * u_hull.abs() * u_hull + 0.5 * p.linear_drag.x_u * u_hull
}

/// Total hydrodynamic resistance `D(nu) nu`, oriented so that it is
/// subtracted from the applied forces. Surge and the hull-pair yaw moment come
/// from the per-hull drag split; sway and yaw rows from the linear and
/// quadratic drag matrices.
pub fn drag_wrench(p: &VehicleParams, nu: &Vector3<f64>) -> Wrench {
    let (v, r) = (nu[1], nu[2]);
    let l = &p.linear_drag;
    let q = &p.quadratic_drag;

    let (u_p, u_s) = hull_surge_velocities(p, nu);
    let d_p = hull_drag(p, u_p);
    let d_s = hull_drag(p, u_s);

    let sway = (l.y_v + q.y_vv * v.abs() + q.y_vr * r.abs()) * v + (l.y_r + q.y_rv * v.abs() + q.y_rr * r.abs()) * r;
    let yaw = (l.n_v + q.n_vv * v.abs() + q.n_vr * r.abs()) * v + (l.n_r + q.n_rv * v.abs() + q.n_rr * r.abs()) * r;

    Wrench::new(d_p + d_s, sway, yaw + (d_s - d_p) * p.hull_separation_m / 2.0)
}

/// Moment arms `(x, y)` of the port and starboard thrusters about the CG.
pub fn thruster_arms(p: &VehicleParams) -> [(f64, f64); 2] {
    let half = p.hull_separation_m / 2.0;
    [(-p.lcg_m, -half), (-p.lcg_m, half)]
}

/// Force and moment produced by the two azimuthing thrusters.
pub fn propulsion_wrench(p: &VehicleParams, sp: &ThrusterSetpoint) -> Result<Wrench> {
    const SLACK: f64 = 1e-9;
    for angle in [sp.port_azimuth, sp.starboard_azimuth] {
        if !(angle.abs() <= p.max_azimuth_rad + SLACK) {
            return Err(Error::AzimuthOutOfRange { angle, limit: p.max_azimuth_rad });
        }
    }
    let sides = [(sp.port_thrust, sp.port_azimuth), (sp.starboard_thrust, sp.starboard_azimuth)];
    let mut w = Wrench::ZERO;
    for ((thrust, azimuth), (lx, ly)) in sides.into_iter().zip(thruster_arms(p)) {
        let fx = thrust * azimuth.cos();
        let fy = thrust * azimuth.sin();
        w += Wrench::new(fx, fy, lx * fy - ly * fx);
    }
    Ok(w)
}

/// Bollard-pull calibration: motor command (%) against total thrust of both
/// motors (N). `(0, 0)` anchors the dead band between -30 % and 20 %.
pub const THRUST_TABLE: [(f64, f64); 18] = [
    (-100.0, -102.0),
    (-90.0, -84.0),
    (-80.0, -66.0),
    (-70.0, -44.0),
    (-60.0, -31.0),
    (-50.0, -13.0),
    (-40.0, -9.0),
    (-30.0, -4.0),
    (0.0, 0.0),
    (20.0, 29.0),
    (30.0, 34.0),
    (40.0, 78.0),
    (50.0, 110.0),
    (60.0, 144.0),
    (70.0, 175.0),
    (80.0, 203.0),
    (90.0, 228.0),
    (100.0, 254.0),
];

/// Total thrust (N, both motors) for a motor command in percent.
pub fn thrust_from_command(command: f64) -> Result<f64> {
    if !(-100.0..=100.0).contains(&command) {
        return Err(Error::CommandOutOfRange(command));
    }
    let idx = THRUST_TABLE
        .windows(2)
        .position(|w| command <= w[1].0)
        .expect("command lies inside the table range");
    let (c0, t0) = THRUST_TABLE[idx];
    let (c1, t1) = THRUST_TABLE[idx + 1];
    if command == c1 {
        return Ok(t1);
    }
    Ok(t0 + (t1 - t0) * (command - c0) / (c1 - c0))
}

/// Per-thruster thrust for a command applied to both motors.
pub fn thruster_thrust_from_command(command: f64) -> Result<f64> {
    Ok(thrust_from_command(command)? / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub eta_dot: Vector3<f64>,
    pub nu_dot: Vector3<f64>,
}

/// Kinetics and kinematics of the 3-DOF model with a precomputed inverse
/// mass matrix.
#[derive(Debug, Clone)]
pub struct Dynamics {
    pub params: VehicleParams,
    mass: Matrix3<f64>,
    mass_inv: Matrix3<f64>,
}

impl Dynamics {
    pub fn new(params: VehicleParams) -> Result<Self> {
        let mass = mass_matrix(&params)?;
        let mass_inv = mass.try_inverse().ok_or(Error::SingularMassMatrix)?;
        if !mass_inv.iter().all(|v| v.is_finite()) {
            return Err(Error::SingularMassMatrix);
        }
        Ok(Self { params, mass, mass_inv })
    }

    pub fn mass(&self) -> &Matrix3<f64> {
        &self.mass
    }

    pub fn derivative(&self, state: &VehicleState, forces: Wrench) -> StateDerivative {
        let nu = state.nu;
        let coriolis = coriolis_matrix(&self.params, &nu) * nu;
        let drag = drag_wrench(&self.params, &nu).to_vector();
        let nu_dot = self.mass_inv * (forces.to_vector() - coriolis - drag);
        let eta_dot = rotation_matrix(state.heading()) * nu;
        StateDerivative { eta_dot, nu_dot }
    }

    pub fn kinetic_energy(&self, nu: &Vector3<f64>) -> f64 {
        0.5 * nu.dot(&(self.mass * nu))
    }
}

/// `nu_dot = M^-1 (tau + tau_w - C(nu) nu - D(nu) nu)`, `eta_dot = J(psi) nu`.
pub fn state_derivative(
    p: &VehicleParams,
    state: &VehicleState,
    tau: Wrench,
    tau_w: Wrench,
) -> Result<StateDerivative> {
    Ok(Dynamics::new(*p)?.derivative(state, tau + tau_w))
}
