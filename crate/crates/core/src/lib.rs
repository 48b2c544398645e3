//! Simulation and control of a twin-hull unmanned surface vehicle holding
//! station with two azimuthing thrusters.
//!
//! The crate is organized bottom-up:
//!
//! - [`vehicle`]: 3-DOF rigid-body, added-mass and drag model plus propulsion.
//! - [`wind`]: wind loads, apparent wind, turbulence statistics, synthetic
//!   wind and a current disturbance.
//! - [`control`]: PD, backstepping and sliding-mode station-keeping laws and
//!   wind feedforward.
//! - [`allocation`]: weighted pseudoinverse thrust allocation with azimuth
//!   logic and actuator filters.
//! - [`sim`]: fixed-step closed-loop simulator, sensor models and open-loop
//!   identification maneuvers.
//! - [`harness`]: scenario configs, experiment matrices, statistics and CSV
//!   export used by the `stationkeep` binary.

pub mod allocation;
pub mod angle;
pub mod control;
pub mod error;
pub mod harness;
pub mod sim;
pub mod types;
pub mod vehicle;
pub mod wind;

pub use error::{Error, Result};
pub use types::{ThrusterSetpoint, VehicleState, Wrench};
