//! C interface. Every function returns an [`SkStatus`]; on failure a
//! message is kept per thread and read with [`sk_last_error`]. Handles are
//! opaque and owned by the caller until passed to their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};


use stationkeep::allocation::{Allocator, AllocatorConfig};
use stationkeep::control::select_lambda;
use stationkeep::harness::compute_error_stats;
use stationkeep::sim::{run_station_keeping, Scenario, SimConfig, SimLog};
use stationkeep::vehicle::thrust_from_command;
use stationkeep::{Error, ThrusterSetpoint, Wrench};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Config = 4,
    Simulation = 5,
    Io = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SkWrench {
    pub x: f64,
    pub y: f64,
    pub n: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SkThrusterSetpoint {
    pub port_thrust: f64,
    pub starboard_thrust: f64,
    pub port_azimuth: f64,
    pub starboard_azimuth: f64,
}

impl From<ThrusterSetpoint> for SkThrusterSetpoint {
    fn from(s: ThrusterSetpoint) -> Self {
        Self {
            port_thrust: s.port_thrust,
            starboard_thrust: s.starboard_thrust,
            port_azimuth: s.port_azimuth,
            starboard_azimuth: s.starboard_azimuth,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SkLambdaSelection {
    pub rotation: f64,
    pub sampling: f64,
    pub rise_time: f64,
    pub selected: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SkErrorStats {
    pub mean_position_m: f64,
    pub std_position_m: f64,
    pub mean_heading_deg: f64,
    pub std_heading_deg: f64,
}

/// One control tick of a log: time, true pose and velocity, tracking error,
/// controller wrench, thruster output after filtering.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SkLogSample {
    pub t_s: f64,
    pub eta: [f64; 3],
    pub nu: [f64; 3],
    pub error: [f64; 3],
    pub tau: SkWrench,
    pub output: SkThrusterSetpoint,
    pub saturated: bool,
}

/// Allocator with its actuator filters.
pub struct SkAllocator(Allocator);

/// Finished simulation log.
pub struct SkLog(SimLog);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(err: &Error) -> SkStatus {
    match err {
        Error::Config { .. } | Error::InvalidParams(_) | Error::DegenerateGeometry | Error::SingularMassMatrix => {
            SkStatus::Config
        }
        Error::CommandOutOfRange(_) | Error::AzimuthOutOfRange { .. } => SkStatus::OutOfRange,
        Error::NonFinite { .. } | Error::CellFailed { .. } => SkStatus::Simulation,
        Error::Io { .. } | Error::Csv { .. } => SkStatus::Io,
        _ => SkStatus::InvalidArgument,
    }
}

fn fail(status: SkStatus, msg: impl Into<String>) -> SkStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), SkStatus>) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SkStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(SkStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, SkStatus>;
}

impl<T> OrStatus<T> for stationkeep::Result<T> {
    fn or_status(self) -> Result<T, SkStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, SkStatus> {
    p.as_mut().ok_or_else(|| fail(SkStatus::NullPointer, "null output pointer"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, SkStatus> {
    if p.is_null() {
        return Err(fail(SkStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(SkStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn parse_toml<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, SkStatus> {
    toml::from_str(s).map_err(|e| fail(SkStatus::Config, format!("{what}: {}", e.to_string().trim_end())))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static thrust in newtons for a motor command in percent.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn sk_thrust_from_command(command_pct: f64, out: *mut f64) -> SkStatus {
    guard(|| {
        *out_ref(out)? = thrust_from_command(command_pct).or_status()?;
        Ok(())
    })
}

/// Bandwidth candidates for a rotational bandwidth, control rate and
/// actuator rise time.
///
/// # Safety
/// `out` must be null or point to a writable `SkLambdaSelection`.
#[no_mangle]
pub unsafe extern "C" fn sk_select_lambda(
    rotation_hz: f64,
    sample_hz: f64,
    rise_time_s: f64,
    out: *mut SkLambdaSelection,
) -> SkStatus {
    guard(|| {
        let s = select_lambda(rotation_hz, sample_hz, rise_time_s).or_status()?;
        *out_ref(out)? =
            SkLambdaSelection { rotation: s.rotation, sampling: s.sampling, rise_time: s.rise_time, selected: s.selected };
        Ok(())
    })
}

/// Allocator for the default vehicle, or for a TOML allocator config when
/// `config_toml` is non-null.
///
/// # Safety
/// `config_toml` must be null or a NUL-terminated string; `out` must point
/// to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_allocator_new(config_toml: *const c_char, out: *mut *mut SkAllocator) -> SkStatus {
    guard(|| {
        let slot = out_ref(out)?;
        let cfg = if config_toml.is_null() {
            AllocatorConfig::default()
        } else {
            parse_toml(text(config_toml, "allocator config")?, "allocator config")?
        };
        let alloc = Allocator::new(cfg).or_status()?;
        *slot = Box::into_raw(Box::new(SkAllocator(alloc)));
        Ok(())
    })
}

/// Allocates `tau` and advances the actuator filters by `dt`. Writes the
/// filtered thruster output and whether a thrust limit was hit.
///
/// # Safety
/// `alloc` must come from [`sk_allocator_new`]; `out` must be writable;
/// `saturated` may be null.
#[no_mangle]
pub unsafe extern "C" fn sk_allocator_step(
    alloc: *mut SkAllocator,
    tau: SkWrench,
    dt: f64,
    out: *mut SkThrusterSetpoint,
    saturated: *mut bool,
) -> SkStatus {
    guard(|| {
        let a = out_ref(alloc)?;
        let o = out_ref(out)?;
        if !(dt > 0.0) || ![tau.x, tau.y, tau.n].iter().all(|v| v.is_finite()) {
            return Err(fail(SkStatus::InvalidArgument, "dt must be positive and tau finite"));
        }
        let result = a.0.step(&Wrench::new(tau.x, tau.y, tau.n), dt);
        *o = a.0.output().into();
        if let Some(s) = saturated.as_mut() {
            *s = result.saturated;
        }
        Ok(())
    })
}

/// Clears the actuator filters.
///
/// # Safety
/// `alloc` must come from [`sk_allocator_new`].
#[no_mangle]
pub unsafe extern "C" fn sk_allocator_reset(alloc: *mut SkAllocator) -> SkStatus {
    guard(|| {
        out_ref(alloc)?.0.reset();
        Ok(())
    })
}

/// # Safety
/// `alloc` must be null or come from [`sk_allocator_new`], and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_allocator_free(alloc: *mut SkAllocator) {
    if !alloc.is_null() {
        drop(Box::from_raw(alloc));
    }
}

/// Runs a closed-loop scenario given as TOML. `sim_toml` may be null for
/// the default settings.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_run_scenario(
    scenario_toml: *const c_char,
    sim_toml: *const c_char,
    out: *mut *mut SkLog,
) -> SkStatus {
    guard(|| {
        let slot = out_ref(out)?;
        let scenario: Scenario = parse_toml(text(scenario_toml, "scenario")?, "scenario")?;
        let config: SimConfig =
            if sim_toml.is_null() { SimConfig::default() } else { parse_toml(text(sim_toml, "sim config")?, "sim config")? };
        let log = run_station_keeping(&scenario, &config).or_status()?;
        *slot = Box::into_raw(Box::new(SkLog(log)));
        Ok(())
    })
}

/// Number of control ticks in the log (0 for null).
///
/// # Safety
/// `log` must be null or come from [`sk_run_scenario`].
#[no_mangle]
pub unsafe extern "C" fn sk_log_len(log: *const SkLog) -> usize {
    log.as_ref().map_or(0, |l| l.0.rows.len())
}

/// # Safety
/// `log` must come from [`sk_run_scenario`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_log_sample(log: *const SkLog, index: usize, out: *mut SkLogSample) -> SkStatus {
    guard(|| {
        let l = log.as_ref().ok_or_else(|| fail(SkStatus::NullPointer, "null log"))?;
        let o = out_ref(out)?;
        let r = l.0.rows.get(index).ok_or_else(|| {
            fail(SkStatus::OutOfRange, format!("index {index} past end of log ({} rows)", l.0.rows.len()))
        })?;
        *o = SkLogSample {
            t_s: r.t_s,
            eta: [r.x_m, r.y_m, r.psi_rad],
            nu: [r.u_mps, r.v_mps, r.r_radps],
            error: [r.err_x_m, r.err_y_m, r.err_psi_rad],
            tau: SkWrench { x: r.tau_x_n, y: r.tau_y_n, n: r.tau_n_nm },
            output: r.output().into(),
            saturated: r.saturated,
        };
        Ok(())
    })
}

/// # Safety
/// `log` must come from [`sk_run_scenario`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_log_error_stats(log: *const SkLog, out: *mut SkErrorStats) -> SkStatus {
    guard(|| {
        let l = log.as_ref().ok_or_else(|| fail(SkStatus::NullPointer, "null log"))?;
        let o = out_ref(out)?;
        let s = compute_error_stats(&l.0).or_status()?;
        *o = SkErrorStats {
            mean_position_m: s.mean_position_m,
            std_position_m: s.std_position_m,
            mean_heading_deg: s.mean_heading_deg,
            std_heading_deg: s.std_heading_deg,
        };
        Ok(())
    })
}

/// Writes the log as CSV with its metadata header.
///
/// # Safety
/// `log` must come from [`sk_run_scenario`]; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sk_log_write_csv(log: *const SkLog, path: *const c_char) -> SkStatus {
    guard(|| {
        let l = log.as_ref().ok_or_else(|| fail(SkStatus::NullPointer, "null log"))?;
        l.0.write_file(text(path, "path")?).or_status()
    })
}

/// # Safety
/// `log` must be null or come from [`sk_run_scenario`], and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_log_free(log: *mut SkLog) {
    if !log.is_null() {
        drop(Box::from_raw(log));
    }
}

