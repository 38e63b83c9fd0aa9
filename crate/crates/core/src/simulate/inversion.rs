use rand::Rng;

use super::thinning::check_horizon;
use super::tracker::ExcitationTracker;
use super::SimulationConfig;
use crate::error::{HawkesError, Result};
use crate::intensity::{EventSequence, HawkesModel};

/// Inverse-compensator simulation: each gap solves
/// `Lambda(t_{k+1}) - Lambda(t_k) = -log U` with a bracketed Newton iteration.
pub fn hawkes_by_inversion<R: Rng + ?Sized>(
    horizon: f64,
    model: &HawkesModel,
    rng: &mut R,
) -> Result<EventSequence> {
    hawkes_by_inversion_with(horizon, model, rng, &SimulationConfig::default())
}

pub fn hawkes_by_inversion_with<R: Rng + ?Sized>(
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

    loop {
        let target = -(1.0 - rng.gen::<f64>()).ln();
        let increment = |s: f64| {
            lambda * s + model.transient_integral(t + s) - model.transient_integral(t)
                + tracker.integral(t, t + s)
        };
        let rate = |s: f64| lambda + model.transient(t + s) + tracker.at(t + s);

        let window = horizon - t;
        if increment(window) < target {
            break;
        }
        let s = solve_increasing(increment, rate, target, window, config)?;
        let next = t + s;
        if !(next > t) || next > horizon {
            // Gap below floating resolution at this magnitude; the remaining
            // mass is exhausted for practical purposes.
            break;
        }
        t = next;
        times.push(t);
        tracker.record(t);
    }
    Ok(EventSequence::from_sorted(times, horizon))
}

/// Root of `f(s) = target` on `[0, hi]` for increasing `f` with `f(0) = 0`,
/// `f(hi) >= target` and derivative `df`.
fn solve_increasing<F, D>(f: F, df: D, target: f64, hi: f64, config: &SimulationConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (0.0, hi);
    let mut s = 0.0;
    let tol = config.root_tolerance * target.max(1.0);
    for _ in 0..config.max_root_iterations {
        let g = f(s) - target;
        if g.abs() <= tol {
            return Ok(s);
        }
        if g < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if hi - lo <= f64::EPSILON * hi.max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let step = s - g / df(s);
        s = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
    }
    Err(HawkesError::RootNotConverged { iterations: config.max_root_iterations })
}
