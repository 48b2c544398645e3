use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::types::{VehicleState, Wrench};
use crate::vehicle::VehicleParams;
use crate::wind::{apparent_from_true, current_load, wind_wrench, CurrentParams, TrueWind, TrueWindSample, WindParams, WindSample};

/// True wind as a function of time, linearly interpolated between samples
/// and held constant outside the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct WindField {
    samples: Vec<TrueWindSample>,
}

impl WindField {
    pub fn new(samples: Vec<TrueWindSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("wind trace"));
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::InvalidArgument("wind trace timestamps must increase strictly".into()));
        }
        Ok(Self { samples })
    }

    pub fn constant(wind: TrueWind) -> Self {
        Self { samples: vec![TrueWindSample { t: 0.0, wind }] }
    }

    pub fn samples(&self) -> &[TrueWindSample] {
        &self.samples
    }

    pub fn at(&self, t: f64) -> TrueWind {
        let s = &self.samples;
        if t <= s[0].t {
            return s[0].wind;
        }
        let last = s[s.len() - 1];
        if t >= last.t {
            return last.wind;
        }
        let i = s.partition_point(|x| x.t <= t) - 1;
        let (a, b) = (s[i], s[i + 1]);
        let k = (t - a.t) / (b.t - a.t);
        TrueWind {
            speed: a.wind.speed + k * (b.wind.speed - a.wind.speed),
            direction: wrap_angle(a.wind.direction + k * wrap_angle(b.wind.direction - a.wind.direction)),
        }
    }
}

/// Everything outside the vehicle that pushes on it.
#[derive(Debug, Clone)]
pub struct Environment {
    pub wind: Option<WindField>,
    pub wind_params: WindParams,
    pub current: CurrentParams,
}

impl Environment {
    pub fn calm() -> Self {
        Self { wind: None, wind_params: WindParams::default(), current: CurrentParams::default() }
    }

    pub fn apparent_wind(&self, t: f64, state: &VehicleState) -> WindSample {
        match &self.wind {
            Some(field) => apparent_from_true(t, &field.at(t), state),
            None => WindSample { t, speed: 0.0, angle: 0.0 },
        }
    }

    pub fn wind_wrench(&self, t: f64, state: &VehicleState) -> Wrench {
        match &self.wind {
            Some(_) => wind_wrench(&self.wind_params, &self.apparent_wind(t, state)),
            None => Wrench::ZERO,
        }
    }

    /// Wind plus current load at time `t` in state `state`.
    pub fn disturbance(&self, t: f64, state: &VehicleState, params: &VehicleParams) -> Wrench {
        self.wind_wrench(t, state) + current_load(&self.current, t, state, params)
    }
}
