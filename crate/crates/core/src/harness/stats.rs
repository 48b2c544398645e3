use serde::{Deserialize, Serialize};

use crate::angle::{deg, wrap_angle};
use crate::error::{Error, Result};
use crate::sim::{LogRow, SimLog};
use crate::wind::{turbulence_stats, PsdWindow, WindSample};

/// Position error is the horizontal distance to the setpoint; heading
/// error is the absolute wrapped difference. Standard deviations are
/// population values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub mean_position_m: f64,
    pub std_position_m: f64,
    pub mean_heading_deg: f64,
    pub std_heading_deg: f64,
    pub samples: u64,
}

/// Running mean and variance that can be merged across chunks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.m2 / self.n as f64).max(0.0).sqrt()
        }
    }
}

/// Streaming accumulator behind [`compute_error_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorAccumulator {
    position: Moments,
    heading: Moments,
}

impl ErrorAccumulator {
    pub fn push(&mut self, row: &LogRow) {
        self.position.push(row.err_x_m.hypot(row.err_y_m));
        self.heading.push(deg(wrap_angle(row.err_psi_rad).abs()));
    }

    pub fn merge(&mut self, other: &ErrorAccumulator) {
        self.position.merge(&other.position);
        self.heading.merge(&other.heading);
    }

    pub fn finish(&self) -> Result<ErrorStats> {
        if self.position.count() == 0 {
            return Err(Error::Empty("simulation log"));
        }
        Ok(ErrorStats {
            mean_position_m: self.position.mean(),
            std_position_m: self.position.std(),
            mean_heading_deg: self.heading.mean(),
            std_heading_deg: self.heading.std(),
            samples: self.position.count(),
        })
    }
}

pub fn compute_error_stats(log: &SimLog) -> Result<ErrorStats> {
    let mut acc = ErrorAccumulator::default();
    log.rows.iter().for_each(|r| acc.push(r));
    acc.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindStats {
    pub mean_speed_mps: f64,
    pub std_speed_mps: f64,
    /// Circular mean of the apparent angle.
    pub mean_direction_deg: f64,
    /// Circular standard deviation `sqrt(-2 ln R)`.
    pub std_direction_deg: f64,
    pub intensity_pct: f64,
}

/// Statistics of an evenly spaced apparent-wind record.
pub fn compute_wind_stats(samples: &[WindSample], dt: f64) -> Result<WindStats> {
    if samples.len() < 2 {
        return Err(Error::Empty("wind record (need at least 2 samples)"));
    }
    let speeds: Vec<f64> = samples.iter().map(|s| s.speed).collect();
    let turb = turbulence_stats(&speeds, dt, PsdWindow::Rectangular)?;
    let n = samples.len() as f64;
    let (s, c) = samples.iter().fold((0.0, 0.0), |acc, w| (acc.0 + w.angle.sin(), acc.1 + w.angle.cos()));
    let r = (s.hypot(c) / n).min(1.0);
    let mean_dir = if s == 0.0 && c == 0.0 { 0.0 } else { wrap_angle(s.atan2(c)) };
    Ok(WindStats {
        mean_speed_mps: turb.mean,
        std_speed_mps: turb.tke,
        mean_direction_deg: deg(mean_dir),
        std_direction_deg: deg((-2.0 * r.ln()).max(0.0).sqrt()),
        intensity_pct: 100.0 * turb.intensity,
    })
}

/// Raw anemometer readings from a log, one per `period_s`.
pub fn anemometer_record(log: &SimLog, period_s: f64) -> Result<(Vec<WindSample>, f64)> {
    let rows = &log.rows;
    if rows.len() < 2 {
        return Err(Error::Empty("simulation log"));
    }
    let log_dt = rows[1].t_s - rows[0].t_s;
    let every = (period_s / log_dt).round().max(1.0) as usize;
    let samples = rows
        .iter()
        .step_by(every)
        .map(|r| WindSample { t: r.t_s, speed: r.anemo_speed_mps, angle: r.anemo_angle_rad })
        .collect();
    Ok((samples, every as f64 * log_dt))
}

/// Error statistics plus, when the log carries wind, anemometer statistics
/// at `anemometer_period_s`.
pub fn log_stats(log: &SimLog, anemometer_period_s: f64) -> Result<super::LogStats> {
    let errors = compute_error_stats(log)?;
    let has_wind = log.rows.iter().any(|r| r.anemo_speed_mps != 0.0);
    let wind = if has_wind {
        let (samples, dt) = anemometer_record(log, anemometer_period_s)?;
        Some(compute_wind_stats(&samples, dt)?)
    } else {
        None
    };
    Ok(super::LogStats { errors, wind })
}
