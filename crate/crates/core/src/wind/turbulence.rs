use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Taper applied before the periodogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsdWindow {
    #[default]
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurbulenceStats {
    pub mean: f64,
    /// RMS of the speed fluctuations.
    pub tke: f64,
    /// `tke / mean`.
    pub intensity: f64,
    /// One-sided frequency grid (Hz), DC excluded.
    pub frequencies: Vec<f64>,
    /// One-sided PSD of the fluctuations divided by `tke^2`, so that it
    /// integrates to one over the grid.
    pub normalized_psd: Vec<f64>,
    /// Frequency below which 90 % of the fluctuation energy lies.
    pub f90: Option<f64>,
    /// Dominant turbulent length scale `mean / f90`.
    pub length_scale: Option<f64>,
}

impl TurbulenceStats {
    /// Fraction of spectral energy strictly below `f`.
    pub fn energy_fraction_below(&self, f: f64) -> f64 {
        let total: f64 = self.normalized_psd.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let below: f64 = self
            .frequencies
            .iter()
            .zip(&self.normalized_psd)
            .filter(|(fk, _)| **fk < f)
            .map(|(_, p)| p)
            .sum();
        below / total
    }
}

/// One-sided periodogram of a zero-mean series: returns `(frequencies, psd)`
/// with DC dropped. `sum(psd) * df` equals the (window-corrected) variance.
pub fn periodogram(fluctuations: &[f64], dt: f64, window: PsdWindow) -> (Vec<f64>, Vec<f64>) {
    let n = fluctuations.len();
    let weights: Vec<f64> = match window {
        PsdWindow::Rectangular => vec![1.0; n],
        PsdWindow::Hann => (0..n).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()).collect(),
    };
    let power: f64 = weights.iter().map(|w| w * w).sum::<f64>() / n as f64;

    let mut buf: Vec<Complex<f64>> =
        fluctuations.iter().zip(&weights).map(|(x, w)| Complex::new(x * w, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let df = 1.0 / (n as f64 * dt);
    let scale = 1.0 / (n as f64 * n as f64 * power * df);
    let half = n / 2;
    let mut freqs = Vec::with_capacity(half);
    let mut psd = Vec::with_capacity(half);
    for (k, c) in buf.iter().enumerate().take(half + 1).skip(1) {
        let nyquist = n.is_multiple_of(2) && k == half;
        let factor = if nyquist { 1.0 } else { 2.0 };
        freqs.push(k as f64 * df);
        psd.push(factor * c.norm_sqr() * scale);
    }
    (freqs, psd)
}

pub fn turbulence_stats(speeds: &[f64], dt: f64, window: PsdWindow) -> Result<TurbulenceStats> {
    if speeds.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "turbulence statistics need at least 2 samples, got {}",
            speeds.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let n = speeds.len() as f64;
    // shifting by the first sample keeps constant series exactly constant
    let origin = speeds[0];
    let offset = speeds.iter().map(|v| v - origin).sum::<f64>() / n;
    let mean = origin + offset;
    if mean == 0.0 {
        return Err(Error::InvalidArgument("mean speed is zero; turbulence intensity is undefined".into()));
    }
    let fluct: Vec<f64> = speeds.iter().map(|v| (v - origin) - offset).collect();
    let tke = (fluct.iter().map(|v| v * v).sum::<f64>() / n).sqrt();

    let (frequencies, psd) = periodogram(&fluct, dt, window);
    let total: f64 = psd.iter().sum();
    let variance = tke * tke;
    let normalized_psd = if variance > 0.0 { psd.iter().map(|p| p / variance).collect() } else { vec![0.0; psd.len()] };

    let f90 = if total > 0.0 {
        let mut acc = 0.0;
        frequencies.iter().zip(&psd).find_map(|(f, p)| {
            acc += p;
            (acc >= 0.9 * total).then_some(*f)
        })
    } else {
        None
    };

    Ok(TurbulenceStats {
        mean,
        tke,
        intensity: tke / mean,
        frequencies,
        normalized_psd,
        f90,
        length_scale: f90.map(|f| mean / f),
    })
}
