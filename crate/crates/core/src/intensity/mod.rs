//! Conditional intensity, compensator and related quantities.
//!
//! The intensity at an arrival instant is the left limit: only arrivals
//! strictly before `t` contribute. The post-jump value is available through
//! [`post_jump_intensity`].

mod events;
mod model;
mod multivariate;

pub use events::EventSequence;
pub use model::HawkesModel;
pub use multivariate::MultivariateHawkesModel;

use crate::error::{HawkesError, Result};

/// `lambda*(t) = lambda + sum_{t_i < t} mu(t - t_i)`.
pub fn conditional_intensity(model: &HawkesModel, events: &EventSequence, t: f64) -> f64 {
    let past = &events.times()[..events.count_before(t)];
    intensity_from_past(model, past, t)
}

/// `lambda*(t+)`: like [`conditional_intensity`] but arrivals at `t` count.
pub fn post_jump_intensity(model: &HawkesModel, events: &EventSequence, t: f64) -> f64 {
    let upto = events.times().partition_point(|&s| s <= t);
    intensity_from_past(model, &events.times()[..upto], t)
}

pub(crate) fn intensity_from_past(model: &HawkesModel, past: &[f64], t: f64) -> f64 {
    let kernel = model.kernel();
    model.baseline()
        + model.transient(t)
        + past.iter().map(|&s| kernel.excite_unchecked(t - s)).sum::<f64>()
}

/// `A(1) = 0`, `A(i) = exp(-beta (t_i - t_{i-1})) (1 + A(i-1))`.
///
/// `A(i)` equals `sum_{j<i} exp(-beta (t_i - t_j))`.
pub fn decay_state(events: &EventSequence, beta: f64) -> Vec<f64> {
    let times = events.times();
    let mut out = Vec::with_capacity(times.len());
    let mut a = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            a = (-beta * (t - times[i - 1])).exp() * (1.0 + a);
        }
        out.push(a);
    }
    out
}

/// `Lambda(t) = int_0^t lambda*(s) ds` for `t` in `[0, horizon]`.
pub fn compensator(model: &HawkesModel, events: &EventSequence, t: f64) -> Result<f64> {
    if !(0.0..=events.horizon()).contains(&t) {
        return Err(HawkesError::OutOfWindow { t, horizon: events.horizon() });
    }
    let past = &events.times()[..events.count_before(t)];
    Ok(compensator_from_past(model, past, t))
}

pub(crate) fn compensator_from_past(model: &HawkesModel, past: &[f64], t: f64) -> f64 {
    let kernel = model.kernel();
    model.baseline() * t
        + model.transient_integral(t)
        + past.iter().map(|&s| kernel.integral(t - s)).sum::<f64>()
}

/// `Lambda(t_1), ..., Lambda(t_k)` followed by `Lambda(horizon)`.
///
/// Linear time for the exponential kernel via [`decay_state`]; quadratic
/// otherwise.
pub fn compensator_at_events(model: &HawkesModel, events: &EventSequence) -> (Vec<f64>, f64) {
    let times = events.times();
    let horizon = events.horizon();
    let lambda = model.baseline();
    match model.exp_params() {
        Some((alpha, beta)) => {
            let a = decay_state(events, beta);
            let ratio = alpha / beta;
            let at_events = times
                .iter()
                .zip(&a)
                .enumerate()
                .map(|(i, (&t, &ai))| {
                    lambda * t + model.transient_integral(t) + ratio * (i as f64 - ai)
                })
                .collect();
            let tail = times.iter().map(|&s| (-beta * (horizon - s)).exp_m1()).sum::<f64>();
            let at_horizon =
                lambda * horizon + model.transient_integral(horizon) - ratio * tail;
            (at_events, at_horizon)
        }
        None => {
            let at_events = times
                .iter()
                .enumerate()
                .map(|(i, &t)| compensator_from_past(model, &times[..i], t))
                .collect();
            (at_events, compensator_from_past(model, times, horizon))
        }
    }
}

/// Stationary mean intensity `lambda / (1 - n)`.
pub fn mean_intensity(model: &HawkesModel) -> Result<f64> {
    let n = model.require_stationary()?;
    Ok(model.baseline() / (1.0 - n))
}

/// `lambda*_i(t)` for a mutually exciting model.
pub fn multivariate_intensity(
    model: &MultivariateHawkesModel,
    events: &[EventSequence],
    component: usize,
    t: f64,
) -> Result<f64> {
    model.intensity(events, component, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> HawkesModel {
        HawkesModel::exponential(0.5, 2.0, 2.1).unwrap()
    }

    #[test]
    fn intensity_examples() {
        let m = model();
        let none = EventSequence::empty(5.0).unwrap();
        assert_eq!(conditional_intensity(&m, &none, 3.0), 0.5);
        let one = EventSequence::new(vec![1.0], 5.0).unwrap();
        let want = 0.5 + 2.0 * (-2.1f64).exp();
        assert!((conditional_intensity(&m, &one, 2.0) - want).abs() < 1e-15);
        assert!((want - 0.744913).abs() < 1e-6);
        assert_eq!(conditional_intensity(&m, &one, 1.0), 0.5);
        assert_eq!(post_jump_intensity(&m, &one, 1.0), 2.5);
    }

    #[test]
    fn decay_state_examples() {
        let single = EventSequence::new(vec![3.0], 5.0).unwrap();
        assert_eq!(decay_state(&single, 1.0), vec![0.0]);
        let two = EventSequence::new(vec![1.0, 2.0], 5.0).unwrap();
        let a = decay_state(&two, 1.0);
        assert_eq!(a[0], 0.0);
        assert!((a[1] - (-1f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn compensator_examples() {
        let m = model();
        let none = EventSequence::empty(4.0).unwrap();
        assert_eq!(compensator(&m, &none, 3.0).unwrap(), 1.5);
        let one = EventSequence::new(vec![1.0], 2.0).unwrap();
        let want = 1.0 - (2.0 / 2.1) * ((-2.1f64).exp() - 1.0);
        assert!((compensator(&m, &one, 2.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 1.835756).abs() < 1e-6);
        assert_eq!(compensator(&m, &one, 0.0).unwrap(), 0.0);
        assert!(matches!(compensator(&m, &one, 2.5), Err(HawkesError::OutOfWindow { .. })));
        assert!(compensator(&m, &one, -0.1).is_err());
    }

    #[test]
    fn compensator_at_events_matches_pointwise() {
        let ev = EventSequence::new(vec![0.3, 0.9, 1.0, 2.7, 4.4], 6.0).unwrap();
        for m in [
            model(),
            HawkesModel::power_law(0.7, 0.4, 0.5, 1.8).unwrap(),
            HawkesModel::exponential(0.5, 1.0, 3.0).unwrap().with_initial_intensity(4.0).unwrap(),
        ] {
            let (at, end) = compensator_at_events(&m, &ev);
            for (&t, &l) in ev.times().iter().zip(&at) {
                let direct = compensator(&m, &ev, t).unwrap();
                assert!((direct - l).abs() < 1e-12 * direct.max(1.0), "{direct} vs {l}");
            }
            let direct = compensator(&m, &ev, 6.0).unwrap();
            assert!((direct - end).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn mean_intensity_examples() {
        assert!((mean_intensity(&model()).unwrap() - 10.5).abs() < 1e-12);
        let poisson = HawkesModel::exponential(1.0, 0.0, 1.0).unwrap();
        assert_eq!(mean_intensity(&poisson).unwrap(), 1.0);
        let explosive = HawkesModel::exponential(1.0, 3.0, 2.0).unwrap();
        assert_eq!(
            mean_intensity(&explosive),
            Err(HawkesError::NonStationary { branching_ratio: 1.5 })
        );
    }

    #[test]
    fn initial_intensity_term() {
        let m = HawkesModel::exponential(1.0, 1.0, 2.0).unwrap().with_initial_intensity(3.0).unwrap();
        let none = EventSequence::empty(10.0).unwrap();
        assert!((conditional_intensity(&m, &none, 0.0) - 3.0).abs() < 1e-15);
        assert!((conditional_intensity(&m, &none, 1.0) - (1.0 + 2.0 * (-2f64).exp())).abs() < 1e-15);
        let want = 1.0 + (1.0 - (-2f64).exp());
        assert!((compensator(&m, &none, 1.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn multivariate_examples() {
        let decoupled = MultivariateHawkesModel::new(
            vec![0.7, 1.3],
            vec![vec![0.0; 2]; 2],
            vec![vec![1.0; 2]; 2],
        )
        .unwrap();
        let ev = vec![
            EventSequence::new(vec![0.5, 1.5], 3.0).unwrap(),
            EventSequence::new(vec![1.0], 3.0).unwrap(),
        ];
        for t in [0.0, 0.7, 2.9] {
            assert_eq!(multivariate_intensity(&decoupled, &ev, 0, t).unwrap(), 0.7);
            assert_eq!(multivariate_intensity(&decoupled, &ev, 1, t).unwrap(), 1.3);
        }
        assert!(matches!(
            multivariate_intensity(&decoupled, &ev, 2, 1.0),
            Err(HawkesError::ComponentOutOfRange { index: 2, dimension: 2 })
        ));

        let cross = MultivariateHawkesModel::new(
            vec![1.0, 1.0],
            vec![vec![0.0, 0.8], vec![0.0, 0.0]],
            vec![vec![1.0, 3.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let ev = vec![EventSequence::empty(3.0).unwrap(), EventSequence::new(vec![1.0], 3.0).unwrap()];
        let want = 1.0 + 0.8 * (-3.0f64 * 0.5).exp();
        assert!((multivariate_intensity(&cross, &ev, 0, 1.5).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn symmetric_model_identical_streams() {
        let m = MultivariateHawkesModel::symmetric(2, 1.0, 2.0, 8.0).unwrap();
        let s = EventSequence::new(vec![0.2, 0.4, 1.1], 2.0).unwrap();
        let ev = vec![s.clone(), s];
        for t in [0.1, 0.5, 1.2, 2.0] {
            assert_eq!(
                multivariate_intensity(&m, &ev, 0, t).unwrap(),
                multivariate_intensity(&m, &ev, 1, t).unwrap()
            );
        }
    }
}
