//! Log-likelihood evaluation and maximum likelihood fitting for the
//! exponential-kernel Hawkes model.
//!
//! The log-likelihood over `[0, T]` is
//! `sum_i log lambda*(t_i) - Lambda(T)`. Passing `T = t_k` recovers the
//! form that ends at the last arrival.

pub mod nelder_mead;

use serde::{Deserialize, Serialize};

use crate::error::{HawkesError, Result};
use crate::intensity::{compensator_at_events, intensity_from_past, EventSequence, HawkesModel};
use nelder_mead::{minimize, NelderMeadOptions};

/// O(k^2) evaluation with the explicit double sum.
pub fn log_likelihood_direct(model: &HawkesModel, events: &EventSequence) -> Result<f64> {
    let (alpha, beta) = model.require_exp()?;
    let lambda = model.baseline();
    let times = events.times();
    let horizon = events.horizon();

    let mut log_sum = 0.0;
    for (i, &ti) in times.iter().enumerate() {
        let excitation: f64 = times[..i].iter().map(|&tj| (-beta * (ti - tj)).exp()).sum();
        log_sum += (lambda + model.transient(ti) + alpha * excitation).ln();
    }
    let tail: f64 = times.iter().map(|&ti| (-beta * (horizon - ti)).exp() - 1.0).sum();
    let compensator = lambda * horizon + model.transient_integral(horizon) - (alpha / beta) * tail;
    Ok(log_sum - compensator)
}

/// O(k) evaluation through the decay recursion `A(i)`.
pub fn log_likelihood_recursive(model: &HawkesModel, events: &EventSequence) -> Result<f64> {
    let (alpha, beta) = model.require_exp()?;
    Ok(recursive_unchecked(model.baseline(), alpha, beta, model, events))
}

fn recursive_unchecked(lambda: f64, alpha: f64, beta: f64, model: &HawkesModel, events: &EventSequence) -> f64 {
    let times = events.times();
    let horizon = events.horizon();
    let mut log_sum = 0.0;
    let mut tail = 0.0;
    let mut a = 0.0;
    let mut prev = f64::NAN;
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            a = (-beta * (t - prev)).exp() * (1.0 + a);
        }
        prev = t;
        log_sum += (lambda + model.transient(t) + alpha * a).ln();
        tail += (-beta * (horizon - t)).exp_m1();
    }
    log_sum - lambda * horizon - model.transient_integral(horizon) + (alpha / beta) * tail
}

/// Log-likelihood for any kernel: recursive for exponential kernels,
/// otherwise O(k^2) through the intensity and the analytic compensator.
pub fn log_likelihood(model: &HawkesModel, events: &EventSequence) -> f64 {
    if model.exp_params().is_some() {
        return log_likelihood_recursive(model, events).expect("exponential kernel");
    }
    let times = events.times();
    let log_sum: f64 = times
        .iter()
        .enumerate()
        .map(|(i, &t)| intensity_from_past(model, &times[..i], t).ln())
        .sum();
    let (_, at_horizon) = compensator_at_events(model, events);
    log_sum - at_horizon
}

/// Homogeneous Poisson log-likelihood `k log(lambda) - lambda T`.
pub fn poisson_log_likelihood(rate: f64, events: &EventSequence) -> f64 {
    events.len() as f64 * rate.ln() - rate * events.horizon()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub optimizer: NelderMeadOptions,
    /// Branching ratios used to seed the start grid.
    pub start_branching: Vec<f64>,
    /// Multiples of the inverse mean interarrival time used for `beta`.
    pub start_decay_multiples: Vec<f64>,
    /// Extra `(branching, decay multiple)` pairs appended to the grid.
    pub extra_starts: Vec<(f64, f64)>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            optimizer: NelderMeadOptions::default(),
            start_branching: vec![0.2, 0.5, 0.8],
            start_decay_multiples: vec![0.1, 1.0],
            extra_starts: vec![(0.5, 0.01), (0.5, 10.0)],
        }
    }
}

/// Result of [`fit_mle`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: HawkesModel,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub restarts_used: usize,
}

/// Flat JSON form of a fit, readable back as a model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub loglik: f64,
    pub branching_ratio: f64,
    pub converged: bool,
    pub iterations: usize,
    pub restarts_used: usize,
}

impl FitResult {
    pub fn summary(&self) -> FitSummary {
        let (alpha, beta) = self.params.exp_params().expect("fits are exponential");
        FitSummary {
            lambda: self.params.baseline(),
            alpha,
            beta,
            loglik: self.log_likelihood,
            branching_ratio: alpha / beta,
            converged: self.converged,
            iterations: self.iterations,
            restarts_used: self.restarts_used,
        }
    }
}

/// Poisson-only fit: `lambda = k / T`, `alpha = 0`, `beta = 1`.
///
/// With no events the rate is taken as `1 / (2T)` so the model stays valid.
pub fn fit_poisson(events: &EventSequence) -> Result<HawkesModel> {
    let horizon = events.horizon();
    if !(horizon > 0.0) {
        return Err(HawkesError::EmptyInput);
    }
    let count = (events.len() as f64).max(0.5);
    HawkesModel::exponential(count / horizon, 0.0, 1.0)
}

/// Maximum likelihood over `(lambda, alpha, beta)`.
///
/// Optimises the negative recursive log-likelihood in log-parameters with a
/// Nelder-Mead multistart: `init` (if given) followed by a deterministic grid
/// derived from the event rate and mean gap. The best start is polished by one
/// further simplex restart.
pub fn fit_mle(events: &EventSequence, init: Option<&HawkesModel>, config: &FitConfig) -> Result<FitResult> {
    let k = events.len();
    let horizon = events.horizon();
    if !(horizon > 0.0) {
        return Err(HawkesError::EmptyInput);
    }
    if k <= 1 {
        let params = fit_poisson(events)?;
        return Ok(FitResult {
            log_likelihood: log_likelihood_recursive(&params, events)?,
            params,
            converged: false,
            iterations: 0,
            restarts_used: 0,
        });
    }
    // The optimised model never carries an initial-intensity transient.
    let template = HawkesModel::exponential(1.0, 0.0, 1.0)?;
    let objective = |x: &[f64]| {
        let (lambda, alpha, beta) = (x[0].exp(), x[1].exp(), x[2].exp());
        if !(lambda > 0.0 && lambda.is_finite() && beta > 0.0 && beta.is_finite() && alpha.is_finite()) {
            return f64::INFINITY;
        }
        -recursive_unchecked(lambda, alpha, beta, &template, events)
    };

    let starts = start_points(events, init, config);
    let mut best: Option<nelder_mead::Minimum> = None;
    let mut iterations = 0;
    for start in &starts {
        let m = minimize(objective, start, &config.optimizer);
        iterations += m.iterations;
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    let best = best.expect("start grid is never empty");
    let polished = minimize(objective, &best.x, &config.optimizer);
    iterations += polished.iterations;
    let converged = polished.converged || best.converged;
    let final_point = if polished.value <= best.value { polished } else { best };

    let x = &final_point.x;
    let params = HawkesModel::exponential(x[0].exp(), x[1].exp(), x[2].exp())?;
    Ok(FitResult {
        log_likelihood: log_likelihood_recursive(&params, events)?,
        params,
        converged: converged && final_point.value.is_finite(),
        iterations,
        restarts_used: starts.len(),
    })
}

fn start_points(events: &EventSequence, init: Option<&HawkesModel>, config: &FitConfig) -> Vec<Vec<f64>> {
    let k = events.len() as f64;
    let rate = k / events.horizon();
    let times = events.times();
    let mean_gap = ((times[times.len() - 1] - times[0]) / (k - 1.0)).max(f64::MIN_POSITIVE);

    let mut starts = Vec::new();
    if let Some(m) = init.and_then(|m| m.exp_params().map(|(a, b)| (m.baseline(), a, b))) {
        let (l, a, b) = m;
        starts.push(vec![l.ln(), a.max(1e-12).ln(), b.ln()]);
    }
    let grid = config
        .start_branching
        .iter()
        .flat_map(|&n| config.start_decay_multiples.iter().map(move |&d| (n, d)))
        .chain(config.extra_starts.iter().copied());
    for (n, multiple) in grid {
        let beta = multiple / mean_gap;
        starts.push(vec![(rate * (1.0 - n)).ln(), (n * beta).ln(), beta.ln()]);
    }
    starts
}
