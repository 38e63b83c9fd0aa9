use serde::{Deserialize, Serialize};

use crate::error::{HawkesError, Result};

/// Arrival times `0 <= t_1 < t_2 < ... < t_k <= horizon` observed on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEvents")]
pub struct EventSequence {
    times: Vec<f64>,
    horizon: f64,
}

#[derive(Deserialize)]
struct RawEvents {
    times: Vec<f64>,
    horizon: f64,
}

impl TryFrom<RawEvents> for EventSequence {
    type Error = HawkesError;
    fn try_from(raw: RawEvents) -> Result<Self> {
        EventSequence::new(raw.times, raw.horizon)
    }
}

impl EventSequence {
    /// Validates ordering and window membership. The reported index is
    /// zero-based.
    pub fn new(times: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(HawkesError::InvalidEvents(format!(
                "horizon must be finite and >= 0, got {horizon}"
            )));
        }
        let mut prev = f64::NEG_INFINITY;
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(HawkesError::InvalidEvents(format!("event {i} is not finite")));
            }
            if t < 0.0 {
                return Err(HawkesError::InvalidEvents(format!("event {i} at {t} is negative")));
            }
            if t <= prev {
                return Err(HawkesError::InvalidEvents(format!(
                    "event {i} at {t} does not strictly follow previous event at {prev}"
                )));
            }
            if t > horizon {
                return Err(HawkesError::InvalidEvents(format!(
                    "event {i} at {t} lies beyond horizon {horizon}"
                )));
            }
            prev = t;
        }
        Ok(Self { times, horizon })
    }

    /// An empty sequence over `[0, horizon]`.
    pub fn empty(horizon: f64) -> Result<Self> {
        Self::new(Vec::new(), horizon)
    }

    /// Uses the last arrival as the horizon (the `[0, t_k]` convention).
    pub fn ending_at_last(times: Vec<f64>) -> Result<Self> {
        let horizon = times.last().copied().ok_or(HawkesError::EmptyInput)?;
        Self::new(times, horizon)
    }

    /// Simulators only emit valid sequences; skip the scan in release builds.
    pub(crate) fn from_sorted(times: Vec<f64>, horizon: f64) -> Self {
        debug_assert!(Self::new(times.clone(), horizon).is_ok());
        Self { times, horizon }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn into_times(self) -> Vec<f64> {
        self.times
    }

    /// Number of events strictly before `t`.
    pub fn count_before(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s < t)
    }

    /// Number of events in `(a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let lo = self.times.partition_point(|&s| s <= a);
        let hi = self.times.partition_point(|&s| s <= b);
        hi.saturating_sub(lo)
    }

    /// Gaps `t_1 - 0, t_2 - t_1, ...`.
    pub fn interarrivals(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.times
            .iter()
            .map(|&t| {
                let d = t - prev;
                prev = t;
                d
            })
            .collect()
    }

    /// Rescales time by `factor > 0`, horizon included.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.times.iter().map(|t| t * factor).collect(), self.horizon * factor)
    }
}
