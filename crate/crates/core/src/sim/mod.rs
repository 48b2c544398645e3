//! Fixed-step closed-loop simulation and open-loop identification runs.
//!
//! Physics advance with classical RK4 at `dt_s`; the controller, allocator
//! and log run every `control_ticks` physics steps and the anemometer every
//! `anemometer_ticks`, both counted in integer steps so there is no drift.
//! Thruster commands are held constant between control ticks.

mod config;
mod env;
mod log;
mod scenario;
mod sysid;

pub use config::{SensorModels, SimConfig};
pub use env::{Environment, WindField};
pub use log::{LogRow, Metadata, SimLog, TickRecord, LOG_COLUMNS};
pub use scenario::{CurrentSpec, Pose, Scenario, WindSpec};
pub use sysid::{run_sysid_maneuver, Maneuver};

use crate::allocation::Allocator;
use crate::angle::{rad, wrap_angle};
use crate::control::{apply_feedforward, tracking_error, Controller};
use crate::error::{Error, Result};
use crate::types::{VehicleState, Wrench};
use crate::vehicle::{propulsion_wrench, Dynamics};
use crate::wind::{read_wind_trace, synthesize_wind, wind_wrench, MovingAverage, WindSample};

/// One RK4 step of length `dt` from time `t`. `forces` gives the total
/// external wrench (propulsion plus disturbances) for a trial state.
pub fn step(
    dynamics: &Dynamics,
    state: &VehicleState,
    t: f64,
    dt: f64,
    mut forces: impl FnMut(f64, &VehicleState) -> Wrench,
) -> Result<VehicleState> {
    let mut eval = |tt: f64, s: &VehicleState| {
        let d = dynamics.derivative(s, forces(tt, s));
        (d.eta_dot, d.nu_dot)
    };
    let shifted = |k: &(nalgebra::Vector3<f64>, nalgebra::Vector3<f64>), h: f64| VehicleState {
        eta: state.eta + k.0 * h,
        nu: state.nu + k.1 * h,
    };
    let k1 = eval(t, state);
    let k2 = eval(t + dt / 2.0, &shifted(&k1, dt / 2.0));
    let k3 = eval(t + dt / 2.0, &shifted(&k2, dt / 2.0));
    let k4 = eval(t + dt, &shifted(&k3, dt));
    let mut next = VehicleState {
        eta: state.eta + (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) * (dt / 6.0),
        nu: state.nu + (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) * (dt / 6.0),
    };
    if !next.is_finite() {
        return Err(Error::NonFinite { t: t + dt, eta: next.eta.into(), nu: next.nu.into() });
    }
    next.normalize();
    Ok(next)
}

fn quantize(value: f64, resolution: f64) -> f64 {
    (value / resolution).round() * resolution
}

/// Navigation sensors: GPS position on a fixed grid, compass heading at
/// finite resolution. Velocities pass through.
pub fn sample_sensors(state: &VehicleState, models: &SensorModels) -> VehicleState {
    let mut sensed = *state;
    if models.gps_enabled {
        sensed.eta[0] = quantize(state.eta[0], models.gps_resolution_m);
        sensed.eta[1] = quantize(state.eta[1], models.gps_resolution_m);
    }
    if models.compass_enabled {
        sensed.eta[2] = wrap_angle(quantize(state.eta[2], rad(models.compass_resolution_deg)));
    }
    sensed
}

/// Anemometer reading of an apparent-wind sample.
pub fn sample_anemometer(apparent: &WindSample, models: &SensorModels) -> WindSample {
    if !models.anemometer_enabled {
        return *apparent;
    }
    let speed = quantize(apparent.speed, models.anemometer_resolution_mps).clamp(0.0, models.anemometer_max_mps);
    WindSample { speed, ..*apparent }
}

/// Builds the disturbance environment of a scenario; synthetic wind uses
/// `config.seed`.
pub fn build_environment(scenario: &Scenario, config: &SimConfig) -> Result<Environment> {
    let wind = match &scenario.wind {
        None => None,
        Some(spec) => match &spec.trace_path {
            Some(path) => Some(WindField::new(read_wind_trace(path)?)?),
            None if spec.mean_speed_mps == 0.0 => None,
            None => Some(WindField::new(synthesize_wind(config.seed, &spec.synthesis(config.duration_s))?)?),
        },
    };
    Ok(Environment { wind, wind_params: scenario.wind_model, current: scenario.current.params() })
}

fn metadata(scenario: &Scenario, config: &SimConfig) -> Metadata {
    let echo = |v: std::result::Result<String, toml::ser::Error>| v.unwrap_or_else(|e| format!("<unserializable: {e}>"));
    vec![
        ("tool".into(), format!("stationkeep {}", env!("CARGO_PKG_VERSION"))),
        ("scenario".into(), scenario.name.clone()),
        ("controller".into(), scenario.controller.to_string()),
        ("feedforward".into(), scenario.feedforward.to_string()),
        ("seed".into(), config.seed.to_string()),
        ("sim_config".into(), echo(toml::to_string(config)).trim_end().to_string()),
        ("scenario_config".into(), echo(toml::to_string(scenario)).trim_end().to_string()),
    ]
}

/// Closed-loop station keeping for `config.duration_s`.
pub fn run_station_keeping(scenario: &Scenario, config: &SimConfig) -> Result<SimLog> {
    scenario.validate()?;
    config.validate()?;
    let env = build_environment(scenario, config)?;
    run_station_keeping_in(scenario, config, &env)
}

/// As [`run_station_keeping`] with a caller-supplied environment.
pub fn run_station_keeping_in(scenario: &Scenario, config: &SimConfig, env: &Environment) -> Result<SimLog> {
    config.validate()?;
    let params = scenario.vehicle;
    let dynamics = Dynamics::new(params)?;
    let mut controller = Controller::new(scenario.controller, &scenario.gains, &params)?;
    let mut allocator = Allocator::new(scenario.allocator_config())?;
    let mut filter = MovingAverage::default();

    let setpoint = scenario.setpoint();
    let control_ticks = config.control_ticks()?;
    let anemometer_ticks = config.anemometer_ticks()?;
    let control_dt = config.control_dt();
    let dt = config.dt_s;

    let mut state = scenario.initial_state();
    let mut anemometer = WindSample::default();
    let mut anemometer_filtered = WindSample::default();
    let mut propulsion = Wrench::ZERO;
    let steps = config.steps();
    let mut rows = Vec::with_capacity((steps / control_ticks + 1) as usize);

    for k in 0..steps {
        let t = k as f64 * dt;
        if k % anemometer_ticks == 0 {
            anemometer = sample_anemometer(&env.apparent_wind(t, &state), &config.sensors);
            anemometer_filtered = filter.push(&anemometer);
        }
        if k % control_ticks == 0 {
            let sensed = sample_sensors(&state, &config.sensors);
            let tau = controller.compute(&sensed, &setpoint, control_dt);
            let wind_estimate =
                if env.wind.is_some() { wind_wrench(&env.wind_params, &anemometer_filtered) } else { Wrench::ZERO };
            let tau_cmd = if scenario.feedforward { apply_feedforward(tau, wind_estimate) } else { tau };
            let allocation = allocator.step(&tau_cmd, control_dt);
            controller.report_saturation(allocation.saturated);
            let output = allocator.output();
            propulsion = propulsion_wrench(&params, &output)?;
            let (error, _) = tracking_error(&state, &setpoint);
            let true_wind = env.wind.as_ref().map(|w| w.at(t)).unwrap_or_default();
            rows.push(LogRow::from(TickRecord {
                t,
                state: &state,
                sensed: &sensed,
                error,
                tau,
                wind_estimate,
                tau_cmd,
                allocation: &allocation,
                output,
                anemometer,
                anemometer_filtered,
                wind: env.wind_wrench(t, &state),
                true_wind: (true_wind.speed, true_wind.direction),
            }));
        }
        state = step(&dynamics, &state, t, dt, |ts, s| propulsion + env.disturbance(ts, s, &params))?;
    }
    Ok(SimLog { metadata: metadata(scenario, config), rows })
}
