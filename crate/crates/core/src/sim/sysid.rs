use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{step, LogRow, SimLog};
use crate::angle::rad;
use crate::error::{Error, Result};
use crate::types::{ThrusterSetpoint, VehicleState, Wrench};
use crate::vehicle::{propulsion_wrench, thruster_thrust_from_command, Dynamics, VehicleParams};

/// Open-loop throttle schedules used to identify the maneuvering model.
/// Commands are motor percentages in `[-100, 100]`; azimuths stay at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Maneuver {
    /// Vehicle restrained; logs the static thrust.
    Bollard { command_pct: f64, duration_s: f64 },
    /// Straight-line run from rest, then throttle off.
    Acceleration { command_pct: f64, run_s: f64, coast_s: f64 },
    /// Straight run at `command_pct`, then both motors split in opposite
    /// directions to spin on the spot.
    Circle { command_pct: f64, straight_s: f64, turn_s: f64 },
    /// Differential throttle, swapped each time the heading passes
    /// `switch_deg` either side of the initial heading.
    Zigzag { high_pct: f64, low_pct: f64, switch_deg: f64, duration_s: f64 },
}

impl Maneuver {
    pub fn name(&self) -> &'static str {
        match self {
            Maneuver::Bollard { .. } => "bollard",
            Maneuver::Acceleration { .. } => "acceleration",
            Maneuver::Circle { .. } => "circle",
            Maneuver::Zigzag { .. } => "zigzag",
        }
    }

    /// The standard schedule of each kind.
    pub fn standard(kind: &str) -> Result<Self> {
        Ok(match kind {
            "bollard" => Maneuver::Bollard { command_pct: 100.0, duration_s: 10.0 },
            "acceleration" => Maneuver::Acceleration { command_pct: 100.0, run_s: 60.0, coast_s: 60.0 },
            "circle" => Maneuver::Circle { command_pct: 100.0, straight_s: 20.0, turn_s: 30.0 },
            "zigzag" => Maneuver::Zigzag { high_pct: 100.0, low_pct: 50.0, switch_deg: 20.0, duration_s: 120.0 },
            other => return Err(Error::InvalidArgument(format!("unknown maneuver '{other}'"))),
        })
    }

    fn duration(&self) -> f64 {
        match *self {
            Maneuver::Bollard { duration_s, .. } => duration_s,
            Maneuver::Acceleration { run_s, coast_s, .. } => run_s + coast_s,
            Maneuver::Circle { straight_s, turn_s, .. } => straight_s + turn_s,
            Maneuver::Zigzag { duration_s, .. } => duration_s,
        }
    }

    fn validate(&self) -> Result<()> {
        let pcts: &[f64] = match self {
            Maneuver::Bollard { command_pct, .. }
            | Maneuver::Acceleration { command_pct, .. }
            | Maneuver::Circle { command_pct, .. } => &[*command_pct],
            Maneuver::Zigzag { high_pct, low_pct, .. } => &[*high_pct, *low_pct],
        };
        for p in pcts {
            thruster_thrust_from_command(*p)?;
        }
        if !(self.duration() > 0.0) {
            return Err(Error::InvalidArgument(format!("{} maneuver needs a positive duration", self.name())));
        }
        if let Maneuver::Zigzag { switch_deg, .. } = self {
            if !(*switch_deg > 0.0 && *switch_deg < 180.0) {
                return Err(Error::InvalidArgument(format!("zigzag switch angle must lie in (0, 180), got {switch_deg}")));
            }
        }
        Ok(())
    }
}

struct Throttle {
    port: f64,
    starboard: f64,
}

/// Runs a maneuver from rest at the origin heading north, physics at `dt`
/// and one log row every `log_ticks` steps.
pub fn run_sysid_maneuver(maneuver: &Maneuver, params: &VehicleParams, dt: f64, log_ticks: u64) -> Result<SimLog> {
    maneuver.validate()?;
    if !(dt > 0.0) || log_ticks == 0 {
        return Err(Error::InvalidArgument("dt must be positive and log_ticks non-zero".into()));
    }
    let dynamics = Dynamics::new(*params)?;
    let steps = (maneuver.duration() / dt).round() as u64;
    let mut state = VehicleState::at_rest(0.0, 0.0, 0.0);
    let mut rows = Vec::new();
    let mut zig_high_on_port = true;

    for k in 0..steps {
        let t = k as f64 * dt;
        let throttle = match *maneuver {
            Maneuver::Bollard { command_pct, .. } => Throttle { port: command_pct, starboard: command_pct },
            Maneuver::Acceleration { command_pct, run_s, .. } => {
                let c = if t < run_s { command_pct } else { 0.0 };
                Throttle { port: c, starboard: c }
            }
            Maneuver::Circle { command_pct, straight_s, .. } => {
                if t < straight_s {
                    Throttle { port: command_pct, starboard: command_pct }
                } else {
                    Throttle { port: -command_pct, starboard: command_pct }
                }
            }
            Maneuver::Zigzag { high_pct, low_pct, switch_deg, .. } => {
                let psi = state.heading();
                // more thrust on port turns the bow to starboard (positive yaw)
                if zig_high_on_port && psi >= rad(switch_deg) {
                    zig_high_on_port = false;
                } else if !zig_high_on_port && psi <= -rad(switch_deg) {
                    zig_high_on_port = true;
                }
                if zig_high_on_port {
                    Throttle { port: high_pct, starboard: low_pct }
                } else {
                    Throttle { port: low_pct, starboard: high_pct }
                }
            }
        };
        let command = ThrusterSetpoint::straight(
            thruster_thrust_from_command(throttle.port)?,
            thruster_thrust_from_command(throttle.starboard)?,
        );
        let tau = propulsion_wrench(params, &command)?;
        if k % log_ticks == 0 {
            rows.push(row(t, &state, tau, &command));
        }
        if !matches!(maneuver, Maneuver::Bollard { .. }) {
            state = step(&dynamics, &state, t, dt, |_, _| tau)?;
        }
    }
    let metadata = vec![
        ("tool".to_string(), format!("stationkeep {}", env!("CARGO_PKG_VERSION"))),
        ("maneuver".to_string(), maneuver.name().to_string()),
        ("maneuver_config".to_string(), toml::to_string(maneuver).unwrap_or_default().trim_end().to_string()),
    ];
    Ok(SimLog { metadata, rows })
}

fn row(t: f64, state: &VehicleState, tau: Wrench, command: &ThrusterSetpoint) -> LogRow {
    let e: Vector3<f64> = state.eta;
    LogRow {
        t_s: t,
        x_m: e[0],
        y_m: e[1],
        psi_rad: e[2],
        u_mps: state.nu[0],
        v_mps: state.nu[1],
        r_radps: state.nu[2],
        x_meas_m: e[0],
        y_meas_m: e[1],
        psi_meas_rad: e[2],
        tau_x_n: tau.x,
        tau_y_n: tau.y,
        tau_n_nm: tau.n,
        tau_cmd_x_n: tau.x,
        tau_cmd_y_n: tau.y,
        tau_cmd_n_nm: tau.n,
        cmd_port_thrust_n: command.port_thrust,
        cmd_stbd_thrust_n: command.starboard_thrust,
        out_port_thrust_n: command.port_thrust,
        out_stbd_thrust_n: command.starboard_thrust,
        ..LogRow::default()
    }
}
