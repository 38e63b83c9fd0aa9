//! Second-order structure of the stationary exponential-kernel process.
//!
//! The complete covariance density is `mean_rate * delta(tau) + R(tau)`. The
//! atom is carried as a scalar weight and `R` is never evaluated at zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HawkesError, Result};
use crate::intensity::{EventSequence, HawkesModel};

/// `(lambda, alpha, beta)` after checking `0 < alpha < beta`.
fn params(model: &HawkesModel) -> Result<(f64, f64, f64)> {
    let (alpha, beta) = model.require_exp()?;
    if !(alpha > 0.0 && alpha < beta) {
        return Err(HawkesError::InvalidParameter(format!(
            "spectral formulas need 0 < alpha < beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok((model.baseline(), alpha, beta))
}

/// Weight of the Dirac atom at lag zero, the stationary mean rate.
pub fn atom_weight(model: &HawkesModel) -> Result<f64> {
    let (lambda, alpha, beta) = params(model)?;
    Ok(lambda * beta / (beta - alpha))
}

/// `R(tau) = alpha beta lambda (2 beta - alpha) / (2 (beta - alpha)^2) * exp(-(beta - alpha) |tau|)`.
pub fn covariance_density(model: &HawkesModel, tau: f64) -> Result<f64> {
    let (lambda, alpha, beta) = params(model)?;
    if !(tau != 0.0 && tau.is_finite()) {
        return Err(HawkesError::InvalidParameter(format!(
            "covariance density is defined for finite non-zero lags, got {tau}"
        )));
    }
    let gap = beta - alpha;
    Ok(alpha * beta * lambda * (2.0 * beta - alpha) / (2.0 * gap * gap) * (-gap * tau.abs()).exp())
}

/// `S(omega) = lambda beta / (2 pi (beta - alpha)) * (1 + alpha (2 beta - alpha) / ((beta - alpha)^2 + omega^2))`.
pub fn power_spectral_density(model: &HawkesModel, omega: f64) -> Result<f64> {
    let (lambda, alpha, beta) = params(model)?;
    let gap = beta - alpha;
    Ok(lambda * beta / (2.0 * std::f64::consts::PI * gap)
        * (1.0 + alpha * (2.0 * beta - alpha) / (gap * gap + omega * omega)))
}

/// One-sided density `S(-omega) + S(omega) = 2 S(omega)`.
pub fn power_spectral_density_one_sided(model: &HawkesModel, omega: f64) -> Result<f64> {
    Ok(2.0 * power_spectral_density(model, omega)?)
}

/// Laplace transform of `R` on `(0, inf)` at real `s > -(beta - alpha)`.
pub fn laplace_covariance(model: &HawkesModel, s: f64) -> Result<f64> {
    let (_, alpha, beta) = params(model)?;
    let gap = beta - alpha;
    if !(s + gap > 0.0) {
        return Err(HawkesError::InvalidParameter(format!(
            "Laplace transform diverges for s = {s} <= -(beta - alpha) = {}",
            -gap
        )));
    }
    Ok(laplace_covariance_complex(model, Complex64::new(s, 0.0))?.re)
}

/// Analytic continuation of [`laplace_covariance`] to complex `s` with
/// `Re s > -(beta - alpha)`.
pub fn laplace_covariance_complex(model: &HawkesModel, s: Complex64) -> Result<Complex64> {
    let (lambda, alpha, beta) = params(model)?;
    let gap = beta - alpha;
    if !(s.re + gap > 0.0) {
        return Err(HawkesError::InvalidParameter("outside the region of convergence".into()));
    }
    let mean = lambda * beta / gap;
    Ok(alpha * mean * (2.0 * beta - alpha) / (2.0 * gap * (s + gap)))
}

/// Closed-form curves on caller-supplied grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurves {
    pub lag_grid: Vec<f64>,
    pub covariance_values: Vec<f64>,
    pub freq_grid: Vec<f64>,
    pub psd_values: Vec<f64>,
    /// Weight of the atom at lag zero.
    pub atom_weight: f64,
}

impl SpectralCurves {
    pub fn evaluate(model: &HawkesModel, lags: &[f64], freqs: &[f64]) -> Result<Self> {
        Ok(Self {
            lag_grid: lags.to_vec(),
            covariance_values: lags.iter().map(|&t| covariance_density(model, t)).collect::<Result<_>>()?,
            freq_grid: freqs.to_vec(),
            psd_values: freqs.iter().map(|&w| power_spectral_density(model, w)).collect::<Result<_>>()?,
            atom_weight: atom_weight(model)?,
        })
    }
}

/// Time discarded before estimating stationary statistics: ten relaxation
/// times `10 / (beta - alpha)`.
pub fn stationary_burn_in(model: &HawkesModel) -> Result<f64> {
    let (_, alpha, beta) = params(model)?;
    Ok(10.0 / (beta - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalCovarianceOptions {
    /// Arrivals before this time are dropped.
    pub burn_in: f64,
    /// Number of contiguous batches used for the standard errors.
    pub batches: usize,
}

impl Default for EmpiricalCovarianceOptions {
    fn default() -> Self {
        Self { burn_in: 0.0, batches: 20 }
    }
}

/// Binned estimate of `R` at lags `j * bin_width`, `j >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCovariance {
    pub bin_width: f64,
    pub lags: Vec<f64>,
    pub estimates: Vec<f64>,
    /// Batch-means standard errors.
    pub standard_errors: Vec<f64>,
    /// Events per unit time over the analysed window.
    pub mean_rate: f64,
}

/// `Cov(count_i, count_{i+j}) / bin_width^2` from one path.
///
/// Lag zero is skipped because it is dominated by the atom. The overall
/// estimate pools the whole window; standard errors come from the spread of
/// the same statistic over contiguous batches.
pub fn empirical_covariance_density(
    events: &EventSequence,
    bin_width: f64,
    max_lag: f64,
    options: &EmpiricalCovarianceOptions,
) -> Result<EmpiricalCovariance> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(HawkesError::InvalidParameter(format!("bin width must be > 0, got {bin_width}")));
    }
    if !(max_lag >= bin_width) {
        return Err(HawkesError::InvalidParameter("max lag must be at least one bin".into()));
    }
    let start = options.burn_in.max(0.0);
    let span = events.horizon() - start;
    let bins = (span / bin_width).floor() as usize;
    let max_j = (max_lag / bin_width + 1e-9).floor() as usize;
    let batches = options.batches.max(2);
    let batch_len = bins / batches;
    if batch_len < 4 * max_j || bins < 2 {
        return Err(HawkesError::TooFewPoints { needed: batches * 4 * max_j, got: bins });
    }

    let mut counts = vec![0.0f64; bins];
    for &t in events.times() {
        if t < start {
            continue;
        }
        let idx = ((t - start) / bin_width) as usize;
        if idx < bins {
            counts[idx] += 1.0;
        }
    }
    let mean = counts.iter().sum::<f64>() / bins as f64;
    let centred: Vec<f64> = counts.iter().map(|c| c - mean).collect();
    let scale = bin_width * bin_width;
    let lagged = |slice: &[f64], j: usize| -> f64 {
        let n = slice.len() - j;
        slice[..n].iter().zip(&slice[j..]).map(|(a, b)| a * b).sum::<f64>() / n as f64 / scale
    };

    let mut lags = Vec::with_capacity(max_j);
    let mut estimates = Vec::with_capacity(max_j);
    let mut standard_errors = Vec::with_capacity(max_j);
    for j in 1..=max_j {
        lags.push(j as f64 * bin_width);
        estimates.push(lagged(&centred, j));
        let per_batch: Vec<f64> = (0..batches)
            .map(|b| lagged(&centred[b * batch_len..(b + 1) * batch_len], j))
            .collect();
        let bm = per_batch.iter().sum::<f64>() / batches as f64;
        let var = per_batch.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
        standard_errors.push((var / batches as f64).sqrt());
    }
    Ok(EmpiricalCovariance {
        bin_width,
        lags,
        estimates,
        standard_errors,
        mean_rate: mean / bin_width,
    })
}
