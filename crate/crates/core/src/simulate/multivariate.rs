use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::thinning::check_horizon;
use super::SimulationConfig;
use crate::error::Result;
use crate::intensity::{EventSequence, MultivariateHawkesModel};

/// Thinning for a mutually exciting process. Candidates are drawn under the
/// total intensity and an accepted point is attributed to component `i` with
/// probability `lambda*_i(t) / sum_j lambda*_j(t)`.
pub fn multivariate_by_thinning<R: Rng + ?Sized>(
    horizon: f64,
    model: &MultivariateHawkesModel,
    rng: &mut R,
) -> Result<Vec<EventSequence>> {
    multivariate_by_thinning_with(horizon, model, rng, &SimulationConfig::default())
}

pub fn multivariate_by_thinning_with<R: Rng + ?Sized>(
    horizon: f64,
    model: &MultivariateHawkesModel,
    rng: &mut R,
    config: &SimulationConfig,
) -> Result<Vec<EventSequence>> {
    check_horizon(horizon)?;
    model.require_stable()?;
    let m = model.dim();
    // level[i * m + j]: excitation of component i by arrivals of j, at `last`.
    let mut level = vec![0.0; m * m];
    let mut last = 0.0;
    let mut streams: Vec<Vec<f64>> = vec![Vec::new(); m];
    let mut rates = vec![0.0; m];

    let fill_rates = |rates: &mut [f64], level: &[f64], last: f64, t: f64| {
        for (i, r) in rates.iter_mut().enumerate() {
            *r = model.baselines()[i]
                + (0..m)
                    .map(|j| level[i * m + j] * (-model.beta(i, j) * (t - last)).exp())
                    .sum::<f64>();
        }
    };

    let mut t = 0.0;
    while t < horizon {
        fill_rates(&mut rates, &level, last, t + config.epsilon);
        let bound: f64 = rates.iter().sum();
        let gap: f64 = Exp1.sample(rng);
        t += gap / bound;
        let u = bound * rng.gen::<f64>();
        if t >= horizon {
            break;
        }
        fill_rates(&mut rates, &level, last, t);
        let mut acc = 0.0;
        let Some(component) = rates.iter().position(|&r| {
            acc += r;
            u <= acc
        }) else {
            continue;
        };
        for i in 0..m {
            for j in 0..m {
                level[i * m + j] *= (-model.beta(i, j) * (t - last)).exp();
            }
            level[i * m + component] += model.alpha(i, component);
        }
        last = t;
        streams[component].push(t);
    }
    Ok(streams.into_iter().map(|s| EventSequence::from_sorted(s, horizon)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HawkesError;
    use crate::rng::seeded;

    #[test]
    fn unstable_model_rejected() {
        let m = MultivariateHawkesModel::symmetric(2, 1.0, 4.0, 4.0).unwrap();
        assert!(matches!(
            multivariate_by_thinning(10.0, &m, &mut seeded(0)),
            Err(HawkesError::NonStationary { .. })
        ));
    }

    #[test]
    fn symmetric_example_produces_both_streams() {
        let m = MultivariateHawkesModel::symmetric(2, 1.0, 2.0, 8.0).unwrap();
        let out = multivariate_by_thinning(10.0, &m, &mut seeded(11)).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|s| !s.is_empty()));
    }
}
