use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::thinning::check_horizon;
use super::{ClusterDepth, SimulationConfig};
use crate::error::{HawkesError, Result};
use crate::intensity::{EventSequence, HawkesModel};

/// Immigration-birth simulation: Poisson immigrants, each the root of a
/// Galton-Watson tree with `Poi(n)` children per event displaced by draws
/// from `mu / n`.
pub fn hawkes_by_clusters<R: Rng + ?Sized>(
    horizon: f64,
    model: &HawkesModel,
    rng: &mut R,
) -> Result<EventSequence> {
    hawkes_by_clusters_with(horizon, model, rng, &SimulationConfig::default())
}

pub fn hawkes_by_clusters_with<R: Rng + ?Sized>(
    horizon: f64,
    model: &HawkesModel,
    rng: &mut R,
    config: &SimulationConfig,
) -> Result<EventSequence> {
    check_horizon(horizon)?;
    let n = model.require_stationary()?;
    if model.initial_intensity().is_some() {
        return Err(HawkesError::Unsupported(
            "cluster simulation has no immigrant representation for an initial intensity".into(),
        ));
    }
    let kernel = model.kernel();

    let immigrants = poisson_count(model.baseline() * horizon, rng);
    let mut times: Vec<f64> = (0..immigrants).map(|_| horizon * rng.gen::<f64>()).collect();
    if n == 0.0 {
        times.sort_by(f64::total_cmp);
        times.dedup();
        return Ok(EventSequence::from_sorted(times, horizon));
    }
    let offspring = Poisson::new(n).expect("n > 0 is a valid Poisson mean");

    // `parents[start..]` is the current generation.
    let mut start = 0;
    loop {
        let end = times.len();
        for idx in start..end {
            let parent = times[idx];
            let children = offspring.sample(rng) as u64;
            for _ in 0..children {
                let child = parent + kernel.offspring_delay_unchecked(rng);
                // Descendants of a child beyond the window are also beyond it.
                if child <= horizon {
                    times.push(child);
                }
            }
        }
        if config.cluster_depth == ClusterDepth::FirstGeneration || times.len() == end {
            break;
        }
        start = end;
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    Ok(EventSequence::from_sorted(times, horizon))
}

pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean > 0.0 {
        Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
    } else {
        0
    }
}
