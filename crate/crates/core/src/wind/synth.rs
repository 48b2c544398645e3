//! Seeded spectral synthesis of gusty wind.
//!
//! Fluctuations are built on the Fourier grid of the output record, so the
//! realized mean and variance can be set exactly: `LOW_BAND_SHARE` of the
//! variance goes to bins below the cutoff with a von Kármán-like roll-off,
//! the remainder to a `f^-5/3` tail up to Nyquist.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{TrueWind, TrueWindSample};
use crate::angle::wrap_angle;
use crate::error::{Error, Result};

pub const LOW_BAND_SHARE: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindSynthesis {
    pub mean_speed: f64,
    /// Mean direction the wind blows from (rad).
    pub mean_direction: f64,
    /// Turbulence intensity `tke / mean`.
    pub intensity: f64,
    pub cutoff_hz: f64,
    /// RMS of the direction fluctuation (rad).
    #[serde(default)]
    pub direction_std: f64,
    pub duration: f64,
    pub dt: f64,
}

impl WindSynthesis {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.mean_speed > 0.0) {
            return bad(format!("mean speed must be positive, got {}", self.mean_speed));
        }
        if !(0.0..1.0).contains(&self.intensity) {
            return bad(format!("intensity must lie in [0, 1), got {}", self.intensity));
        }
        if !(self.cutoff_hz > 0.0) {
            return bad(format!("cutoff must be positive, got {}", self.cutoff_hz));
        }
        if !(self.dt > 0.0) || self.dt >= 1.0 / (2.0 * self.cutoff_hz) {
            return bad(format!(
                "dt = {} must be positive and below 1/(2 f_c) = {}",
                self.dt,
                1.0 / (2.0 * self.cutoff_hz)
            ));
        }
        if !(self.duration * self.cutoff_hz > 1.0) {
            return bad(format!(
                "duration {} s is too short to resolve fluctuations below {} Hz",
                self.duration, self.cutoff_hz
            ));
        }
        if !(self.direction_std >= 0.0) {
            return bad(format!("direction_std must be non-negative, got {}", self.direction_std));
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

fn shape(f: f64, cutoff: f64) -> f64 {
    let knee = cutoff / 3.0;
    if f < cutoff {
        (1.0 + (f / knee).powi(2)).powf(-5.0 / 6.0)
    } else {
        (f / cutoff).powf(-5.0 / 3.0)
    }
}

/// Zero-mean series of length `n` with RMS `rms` and the band split above.
fn fluctuation(rng: &mut ChaCha8Rng, n: usize, dt: f64, cutoff: f64, rms: f64) -> Vec<f64> {
    if rms == 0.0 {
        return vec![0.0; n];
    }
    let df = 1.0 / (n as f64 * dt);
    let half = (n - 1) / 2; // keep the Nyquist bin empty
    let mut spectrum = vec![Complex::new(0.0, 0.0); n];
    let (mut low, mut high) = (0.0, 0.0);
    for k in 1..=half {
        let f = k as f64 * df;
        let amp = shape(f, cutoff).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let c = Complex::new(re, im) * amp;
        if f < cutoff {
            low += c.norm_sqr();
        } else {
            high += c.norm_sqr();
        }
        spectrum[k] = c;
    }
    let (low_share, high_share) = if high > 0.0 { (LOW_BAND_SHARE, 1.0 - LOW_BAND_SHARE) } else { (1.0, 0.0) };
    // each retained bin contributes 2|c|^2 / n^2 to the variance after the
    // inverse transform
    let variance = rms * rms;
    let norm = n as f64 * n as f64 / 2.0;
    let low_gain = (variance * low_share * norm / low).sqrt();
    let high_gain = if high > 0.0 { (variance * high_share * norm / high).sqrt() } else { 0.0 };
    for k in 1..=half {
        let gain = if (k as f64 * df) < cutoff { low_gain } else { high_gain };
        spectrum[k] *= gain;
        spectrum[n - k] = spectrum[k].conj();
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    spectrum.iter().map(|c| c.re / n as f64).collect()
}

/// Deterministic gusty-wind trace for `seed`. Speeds are clamped at zero.
pub fn synthesize_wind(seed: u64, spec: &WindSynthesis) -> Result<Vec<TrueWindSample>> {
    spec.validate()?;
    let n = spec.samples();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let speed = fluctuation(&mut rng, n, spec.dt, spec.cutoff_hz, spec.intensity * spec.mean_speed);
    let direction = fluctuation(&mut rng, n, spec.dt, spec.cutoff_hz, spec.direction_std);
    Ok((0..n)
        .map(|i| TrueWindSample {
            t: i as f64 * spec.dt,
            wind: TrueWind {
                speed: (spec.mean_speed + speed[i]).max(0.0),
                direction: wrap_angle(spec.mean_direction + direction[i]),
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::wind::{turbulence_stats, PsdWindow};

    fn spec(intensity: f64) -> WindSynthesis {
        WindSynthesis {
            mean_speed: 2.43,
            mean_direction: 0.3,
            intensity,
            cutoff_hz: 0.03,
            direction_std: 0.0,
            duration: 700.0,
            dt: 1.0,
        }
    }

    fn speeds(trace: &[TrueWindSample]) -> Vec<f64> {
        trace.iter().map(|s| s.wind.speed).collect()
    }

    #[test]
    fn zero_intensity_is_constant() {
        let trace = synthesize_wind(5, &spec(0.0)).unwrap();
        assert_eq!(trace.len(), 700);
        assert!(trace.iter().all(|s| s.wind.speed == 2.43 && s.wind.direction == 0.3));
    }

    #[test]
    fn seeded_determinism() {
        let a = synthesize_wind(42, &spec(0.15)).unwrap();
        let b = synthesize_wind(42, &spec(0.15)).unwrap();
        let c = synthesize_wind(43, &spec(0.15)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn statistics_across_seeds() {
        for seed in 0..20 {
            let trace = synthesize_wind(seed, &spec(0.15)).unwrap();
            let stats = turbulence_stats(&speeds(&trace), 1.0, PsdWindow::Rectangular).unwrap();
            assert!((stats.mean - 2.43).abs() / 2.43 < 0.02, "seed {seed}: mean {}", stats.mean);
            assert!((0.135..=0.165).contains(&stats.intensity), "seed {seed}: s = {}", stats.intensity);
            assert!(stats.energy_fraction_below(0.03) >= 0.9, "seed {seed}");
            assert!(stats.f90.unwrap() <= 0.03);
        }
    }

    #[test]
    fn direction_fluctuation_rms() {
        let s = WindSynthesis { direction_std: 0.2, ..spec(0.1) };
        let trace = synthesize_wind(1, &s).unwrap();
        let n = trace.len() as f64;
        let rms = (trace.iter().map(|t| (t.wind.direction - 0.3).powi(2)).sum::<f64>() / n).sqrt();
        assert_abs_diff_eq!(rms, 0.2, epsilon = 1e-9);
    }

    #[test]
    fn rejects_aliasing_step() {
        let s = WindSynthesis { dt: 1.0 / 0.06, ..spec(0.15) };
        assert!(synthesize_wind(0, &s).is_err());
        assert!(synthesize_wind(0, &WindSynthesis { intensity: 1.0, ..spec(0.15) }).is_err());
        assert!(synthesize_wind(0, &WindSynthesis { mean_speed: 0.0, ..spec(0.15) }).is_err());
        assert!(synthesize_wind(0, &WindSynthesis { cutoff_hz: 0.0, ..spec(0.15) }).is_err());
    }
}
