use std::collections::VecDeque;

use super::WindSample;
use crate::angle::wrap_angle;

/// Span of the anemometer moving average, in samples.
pub const ANEMOMETER_SPAN: usize = 20;

/// Trailing equal-weight moving average over speed and direction. Direction
/// is averaged through its unit vector so samples either side of +-pi do not
/// cancel. Until the window fills, the available prefix is averaged.
#[derive(Debug, Clone)]
pub struct MovingAverage {
    span: usize,
    window: VecDeque<(f64, f64, f64)>,
}

impl MovingAverage {
    pub fn new(span: usize) -> Self {
        assert!(span > 0, "moving-average span must be positive");
        Self { span, window: VecDeque::with_capacity(span) }
    }

    pub fn push(&mut self, sample: &WindSample) -> WindSample {
        if self.window.len() == self.span {
            self.window.pop_front();
        }
        let (s, c) = sample.angle.sin_cos();
        self.window.push_back((sample.speed, s, c));

        let n = self.window.len() as f64;
        let (speed, sin, cos) =
            self.window.iter().fold((0.0, 0.0, 0.0), |acc, w| (acc.0 + w.0, acc.1 + w.1, acc.2 + w.2));
        let angle = if sin == 0.0 && cos == 0.0 { sample.angle } else { wrap_angle(sin.atan2(cos)) };
        WindSample { t: sample.t, speed: speed / n, angle }
    }

    pub fn reset(&mut self) {
        self.window.clear();
    }
}

impl Default for MovingAverage {
    fn default() -> Self {
        Self::new(ANEMOMETER_SPAN)
    }
}

/// Filters a chronological 1 Hz anemometer record.
pub fn anemometer_filter(raw: &[WindSample]) -> Vec<WindSample> {
    let mut filter = MovingAverage::default();
    raw.iter().map(|s| filter.push(s)).collect()
}
