use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::tracker::ExcitationTracker;
use super::SimulationConfig;
use crate::error::{HawkesError, Result};
use crate::intensity::{EventSequence, HawkesModel};

/// Inhomogeneous Poisson process on `[0, horizon]` by thinning a rate-`bound`
/// homogeneous process. Fails if `rate_fn` is observed above `bound`.
pub fn poisson_by_thinning<F, R>(
    horizon: f64,
    rate_fn: F,
    bound: f64,
    rng: &mut R,
) -> Result<EventSequence>
where
    F: Fn(f64) -> f64,
    R: Rng + ?Sized,
{
    if !(bound.is_finite() && bound > 0.0) {
        return Err(HawkesError::InvalidParameter(format!("bound must be > 0, got {bound}")));
    }
    check_horizon(horizon)?;
    let mut times = Vec::new();
    let mut t = 0.0;
    while t < horizon {
        let gap: f64 = Exp1.sample(rng);
        t += gap / bound;
        let u = bound * rng.gen::<f64>();
        if t < horizon {
            let rate = rate_fn(t);
            if rate > bound {
                return Err(HawkesError::BoundViolation { t, rate, bound });
            }
            if u <= rate {
                times.push(t);
            }
        }
    }
    Ok(EventSequence::from_sorted(times, horizon))
}

/// Ogata's modified thinning: the bound is refreshed to `lambda*(t + eps)`
/// after every candidate, which dominates the intensity until the next
/// arrival because the kernel is non-increasing.
pub fn hawkes_by_thinning<R: Rng + ?Sized>(
    horizon: f64,
    model: &HawkesModel,
    rng: &mut R,
) -> Result<EventSequence> {
    hawkes_by_thinning_with(horizon, model, rng, &SimulationConfig::default())
}

pub fn hawkes_by_thinning_with<R: Rng + ?Sized>(
    horizon: f64,
    model: &HawkesModel,
    rng: &mut R,
    config: &SimulationConfig,
) -> Result<EventSequence> {
    check_horizon(horizon)?;
    let lambda = model.baseline();
    let mut tracker = ExcitationTracker::new(model);
    let mut times = Vec::new();
    let mut t = 0.0;
    while t < horizon {
        let probe = t + config.epsilon;
        // A negative initial transient relaxes upward towards zero, so it is
        // bounded by zero rather than by its current value.
        let bound = lambda + model.transient(probe).max(0.0) + tracker.at(probe);
        let gap: f64 = Exp1.sample(rng);
        t += gap / bound;
        let u = bound * rng.gen::<f64>();
        if t < horizon && u <= lambda + model.transient(t) + tracker.at(t) {
            times.push(t);
            tracker.record(t);
        }
    }
    Ok(EventSequence::from_sorted(times, horizon))
}

pub(crate) fn check_horizon(horizon: f64) -> Result<()> {
    if horizon.is_finite() && horizon >= 0.0 {
        Ok(())
    } else {
        Err(HawkesError::InvalidParameter(format!("horizon must be finite and >= 0, got {horizon}")))
    }
}
