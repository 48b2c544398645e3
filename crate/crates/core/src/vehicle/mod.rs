//! Twin-hull 3-DOF maneuvering model: rigid body, added mass, drag and the
//! azimuthing propulsion pair.

mod dynamics;
mod hydro;
mod params;

pub use dynamics::{
    coriolis_matrix, drag_wrench, hull_surge_velocities, mass_matrix, propulsion_wrench, rotation_matrix,
    rotation_matrix_rate, state_derivative, thrust_from_command, thruster_arms, thruster_thrust_from_command,
    Dynamics, StateDerivative, THRUST_TABLE,
};
pub use hydro::{
    estimate_hydro_coefficients, estimate_hydro_coefficients_with, HullGeometry, HydroCoefficients,
    N_RDOT_END_CONSTANT,
};
pub use params::{AddedMass, LinearDrag, QuadraticDrag, VehicleParams, DEFAULT_X_U, DEFAULT_X_UU};
