//! Residual analysis by random time change, and tests of the hypothesis that
//! the transformed arrivals form a unit-rate Poisson process.
//!
//! All tests are deterministic functions of their input. Kolmogorov-Smirnov
//! p-values use the asymptotic Kolmogorov distribution with plain `sqrt(k)`
//! scaling; treat them as approximate below roughly 35 points.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{HawkesError, Result};
use crate::intensity::{compensator_at_events, EventSequence, HawkesModel};

/// Maps `t_i -> Lambda(t_i)` and the horizon to `Lambda(T)`.
pub fn residual_transform(model: &HawkesModel, events: &EventSequence) -> Result<EventSequence> {
    let (times, horizon) = compensator_at_events(model, events);
    EventSequence::new(times, horizon)
}

/// Survival function of the Kolmogorov distribution,
/// `P(K > x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    if x < 1.18 {
        // Theta-function form converges fast for small x.
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let w = -pi2 / (8.0 * x * x);
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / x
            * (1..=6).map(|j| ((2 * j - 1) as f64).powi(2) * w).map(f64::exp).sum::<f64>();
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * x * x).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Statistic and p-value of a Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

impl KsOutcome {
    pub fn rejects(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// One-sample KS test of `sample` against the continuous `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<KsOutcome> {
    if sample.is_empty() {
        return Err(HawkesError::EmptyInput);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    Ok(KsOutcome { statistic, p_value: kolmogorov_sf(n.sqrt() * statistic) })
}

/// Two-sample KS test with the asymptotic `sqrt(nm / (n + m))` scaling.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(HawkesError::EmptyInput);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut statistic: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        statistic = statistic.max((i as f64 / n - j as f64 / m).abs());
    }
    let scale = (n * m / (n + m)).sqrt();
    Ok(KsOutcome { statistic, p_value: kolmogorov_sf(scale * statistic) })
}

/// KS test of durations against `Exp(1)`.
pub fn ks_exp_test(interarrivals: &[f64]) -> Result<KsOutcome> {
    if let Some(&d) = interarrivals.iter().find(|d| !(**d >= 0.0)) {
        return Err(HawkesError::InvalidParameter(format!("negative duration {d}")));
    }
    ks_one_sample(interarrivals, |x| -(-x).exp_m1())
}

/// Successive-uniform scatter and its lag-one correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrDiagnostics {
    /// `(U_k, U_{k+1})` with `U_k = 1 - exp(-(t*_k - t*_{k-1}))`.
    pub points: Vec<(f64, f64)>,
    /// Pearson correlation of the pairs; `None` when either coordinate is constant.
    pub lag1_corr: Option<f64>,
}

/// Requires at least three arrivals, giving `k - 2` pairs.
pub fn autocorr_diagnostics(transformed: &EventSequence) -> Result<AutocorrDiagnostics> {
    let t = transformed.times();
    if t.len() < 3 {
        return Err(HawkesError::TooFewPoints { needed: 3, got: t.len() });
    }
    let u: Vec<f64> = t.windows(2).map(|w| -(-(w[1] - w[0])).exp_m1()).collect();
    let points: Vec<(f64, f64)> = u.windows(2).map(|w| (w[0], w[1])).collect();
    Ok(AutocorrDiagnostics { lag1_corr: pearson(&points), points })
}

fn pearson(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    // Relative threshold: a constant column leaves only rounding noise.
    let floor = 1e-24 * n * (mx * mx + my * my).max(f64::MIN_POSITIVE);
    if sxx <= floor || syy <= floor {
        None
    } else {
        Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
    }
}

/// Lewis conditional-uniformity test: `t*_i / t*_k` for `i < k` against
/// `Unif[0, 1]`.
pub fn lewis_test(transformed: &EventSequence) -> Result<KsOutcome> {
    lewis_test_with(transformed, false)
}

/// As [`lewis_test`], optionally passing the ratios through Durbin's
/// spacing transformation before the KS stage.
pub fn lewis_test_with(transformed: &EventSequence, durbin: bool) -> Result<KsOutcome> {
    let t = transformed.times();
    if t.len() < 2 {
        return Err(HawkesError::TooFewPoints { needed: 2, got: t.len() });
    }
    let last = t[t.len() - 1];
    let ratios: Vec<f64> = t[..t.len() - 1].iter().map(|&x| x / last).collect();
    let sample = if durbin { durbin_transform(&ratios) } else { ratios };
    ks_one_sample(&sample, |x| x.clamp(0.0, 1.0))
}

/// Durbin's modification: sort the `n + 1` spacings of `n` ordered uniforms,
/// weight their increments by `n + 2 - i` and cumulate. Under the null the
/// result is again a uniform order sample.
pub fn durbin_transform(ordered_uniforms: &[f64]) -> Vec<f64> {
    let n = ordered_uniforms.len();
    let mut spacings = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    for &u in ordered_uniforms {
        spacings.push(u - prev);
        prev = u;
    }
    spacings.push(1.0 - prev);
    spacings.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    let mut prev = 0.0;
    for (i, &c) in spacings.iter().take(n).enumerate() {
        acc += (n + 1 - i) as f64 * (c - prev);
        prev = c;
        out.push(acc);
    }
    out
}

/// `sin^2(pi p / 2)`, the `p` quantile of `Beta(1/2, 1/2)`.
pub fn arcsine_quantile(p: f64) -> f64 {
    (std::f64::consts::FRAC_PI_2 * p).sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcsineOutcome {
    /// Location of the maximum of the rescaled path, in `[0, 1]`.
    pub m_star: f64,
    pub accepted: bool,
    pub lower: f64,
    pub upper: f64,
}

/// `M(s) = (N(sT) - sT) / sqrt(T)` at `s = 0` and just after each arrival.
pub fn brownian_path(events: &EventSequence) -> Vec<(f64, f64)> {
    let horizon = events.horizon();
    let root = horizon.sqrt();
    std::iter::once((0.0, 0.0))
        .chain(
            events
                .times()
                .iter()
                .enumerate()
                .map(|(i, &t)| (t / horizon, ((i + 1) as f64 - t) / root)),
        )
        .collect()
}

fn check_window(events: &EventSequence) -> Result<()> {
    if events.is_empty() {
        return Err(HawkesError::EmptyInput);
    }
    if !(events.horizon() > 0.0) {
        return Err(HawkesError::InvalidParameter("horizon must be > 0".into()));
    }
    Ok(())
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(HawkesError::InvalidParameter(format!("significance level must be in (0, 1), got {level}")))
    }
}

/// Arcsine-law test on the Brownian approximation of the rescaled counting
/// path. The path falls linearly between arrivals, so its maximum sits at
/// the origin or just after an arrival.
pub fn arcsine_test(events: &EventSequence, level: f64) -> Result<ArcsineOutcome> {
    check_window(events)?;
    check_level(level)?;
    let (m_star, _) = brownian_path(events)
        .into_iter()
        .fold((0.0, f64::NEG_INFINITY), |best, (s, m)| if m > best.1 { (s, m) } else { best });
    let lower = arcsine_quantile(level / 2.0);
    let upper = arcsine_quantile(1.0 - level / 2.0);
    Ok(ArcsineOutcome { m_star, accepted: m_star > lower && m_star < upper, lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointOutcome {
    /// `M(1) = (N(T) - T) / sqrt(T)`.
    pub m1: f64,
    pub accepted: bool,
    pub lower: f64,
    pub upper: f64,
}

/// Two-sided normal test on the endpoint `M(1)`.
pub fn endpoint_normal_test(events: &EventSequence, level: f64) -> Result<EndpointOutcome> {
    check_window(events)?;
    check_level(level)?;
    let horizon = events.horizon();
    let m1 = (events.len() as f64 - horizon) / horizon.sqrt();
    let z = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(1.0 - level / 2.0);
    Ok(EndpointOutcome { m1, accepted: m1 >= -z && m1 <= z, lower: -z, upper: z })
}

/// `(empirical, theoretical)` Exp(1) quantile pairs for a Q-Q plot.
pub fn qq_points(interarrivals: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = interarrivals.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, -(-((i as f64 + 0.5) / n)).ln_1p()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestDecision {
    pub statistic: f64,
    pub p_value: f64,
    pub accepted: bool,
}

impl TestDecision {
    fn at_level(ks: KsOutcome, level: f64) -> Self {
        Self { statistic: ks.statistic, p_value: ks.p_value, accepted: !ks.rejects(level) }
    }
}

/// Full battery on the residual-transformed arrivals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub level: f64,
    pub events: usize,
    /// `Lambda(T)`, the horizon of the transformed sequence.
    pub transformed_horizon: f64,
    pub ks_exp: TestDecision,
    pub lewis: TestDecision,
    pub arcsine: ArcsineOutcome,
    pub endpoint_normal: EndpointOutcome,
    pub lag1_serial_corr: Option<f64>,
    pub qq_points: Vec<(f64, f64)>,
    pub autocorr_points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofOptions {
    pub level: f64,
    pub durbin: bool,
}

impl Default for GofOptions {
    fn default() -> Self {
        Self { level: 0.05, durbin: false }
    }
}

/// Transforms `events` through the model's compensator and runs every test.
pub fn goodness_of_fit(model: &HawkesModel, events: &EventSequence, options: &GofOptions) -> Result<GofReport> {
    check_level(options.level)?;
    let transformed = residual_transform(model, events)?;
    battery(&transformed, options)
}

/// The test battery on an already transformed sequence.
pub fn battery(transformed: &EventSequence, options: &GofOptions) -> Result<GofReport> {
    let level = options.level;
    let gaps = transformed.interarrivals();
    let autocorr = autocorr_diagnostics(transformed)?;
    Ok(GofReport {
        level,
        events: transformed.len(),
        transformed_horizon: transformed.horizon(),
        ks_exp: TestDecision::at_level(ks_exp_test(&gaps)?, level),
        lewis: TestDecision::at_level(lewis_test_with(transformed, options.durbin)?, level),
        arcsine: arcsine_test(transformed, level)?,
        endpoint_normal: endpoint_normal_test(transformed, level)?,
        lag1_serial_corr: autocorr.lag1_corr,
        qq_points: qq_points(&gaps),
        autocorr_points: autocorr.points,
    })
}
