//! Excitation kernels: how much a past arrival raises the current intensity.
//!
//! Two families are supported, the exponential kernel `alpha * exp(-beta s)`
//! and the Omori power-law kernel `k / (c + s)^p`. The set is closed on
//! purpose: the estimation and simulation code relies on exponential-specific
//! recursions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HawkesError, Result};

/// `mu(s) = alpha * exp(-beta * s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExp")]
pub struct ExpKernel {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawExp {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawExp> for ExpKernel {
    type Error = HawkesError;
    fn try_from(raw: RawExp) -> Result<Self> {
        ExpKernel::new(raw.alpha, raw.beta)
    }
}

impl ExpKernel {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `mu(s) = k / (c + s)^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPowerLaw")]
pub struct PowerLawKernel {
    k: f64,
    c: f64,
    p: f64,
}

#[derive(Deserialize)]
struct RawPowerLaw {
    k: f64,
    c: f64,
    p: f64,
}

impl TryFrom<RawPowerLaw> for PowerLawKernel {
    type Error = HawkesError;
    fn try_from(raw: RawPowerLaw) -> Result<Self> {
        PowerLawKernel::new(raw.k, raw.c, raw.p)
    }
}

impl PowerLawKernel {
    pub fn new(k: f64, c: f64, p: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "k must be finite and >= 0, got {k}"
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "c must be finite and > 0, got {c}"
            )));
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "p must be finite and > 0, got {p}"
            )));
        }
        Ok(Self { k, c, p })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// The excitation function of a Hawkes process.
///
/// Serialized as `{"type":"exp","alpha":..,"beta":..}` or
/// `{"type":"powerlaw","k":..,"c":..,"p":..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ExcitationKernel {
    Exp(ExpKernel),
    #[serde(rename = "powerlaw")]
    PowerLaw(PowerLawKernel),
}

impl From<ExpKernel> for ExcitationKernel {
    fn from(k: ExpKernel) -> Self {
        ExcitationKernel::Exp(k)
    }
}

impl From<PowerLawKernel> for ExcitationKernel {
    fn from(k: PowerLawKernel) -> Self {
        ExcitationKernel::PowerLaw(k)
    }
}

impl ExcitationKernel {
    pub fn exp(alpha: f64, beta: f64) -> Result<Self> {
        ExpKernel::new(alpha, beta).map(Self::Exp)
    }

    pub fn power_law(k: f64, c: f64, p: f64) -> Result<Self> {
        PowerLawKernel::new(k, c, p).map(Self::PowerLaw)
    }

    pub fn as_exp(&self) -> Option<&ExpKernel> {
        match self {
            ExcitationKernel::Exp(k) => Some(k),
            ExcitationKernel::PowerLaw(_) => None,
        }
    }

    /// `mu(s)` for `s > 0`.
    pub fn excite(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(HawkesError::NonPositiveElapsed(s));
        }
        Ok(self.excite_unchecked(s))
    }

    /// `mu(s)` without the domain check. At `s = 0` this is the right limit
    /// `mu(0+)`, which is what the post-jump intensity needs.
    #[inline]
    pub(crate) fn excite_unchecked(&self, s: f64) -> f64 {
        match *self {
            ExcitationKernel::Exp(ExpKernel { alpha, beta }) => alpha * (-beta * s).exp(),
            ExcitationKernel::PowerLaw(PowerLawKernel { k, c, p }) => k * (c + s).powf(-p),
        }
    }

    /// `int_0^s mu(u) du` for `s >= 0`. Finite for every kernel, including
    /// power-law kernels with `p <= 1`.
    #[inline]
    pub fn integral(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match *self {
            ExcitationKernel::Exp(ExpKernel { alpha, beta }) => {
                -(alpha / beta) * (-beta * s).exp_m1()
            }
            ExcitationKernel::PowerLaw(PowerLawKernel { k, c, p }) => {
                if p == 1.0 {
                    k * (s / c).ln_1p()
                } else {
                    // c^(1-p) - (c+s)^(1-p) = c^(1-p) * (1 - (1 + s/c)^(1-p))
                    let q = 1.0 - p;
                    (k / q) * c.powf(q) * (q * (s / c).ln_1p()).exp_m1()
                }
            }
        }
    }

    /// Expected number of direct offspring per event, `n = int_0^inf mu`.
    pub fn branching_ratio(&self) -> Result<f64> {
        match *self {
            ExcitationKernel::Exp(ExpKernel { alpha, beta }) => Ok(alpha / beta),
            ExcitationKernel::PowerLaw(PowerLawKernel { k, c, p }) => {
                if p <= 1.0 {
                    Err(HawkesError::NonIntegrableKernel { p })
                } else {
                    Ok(k * c.powf(1.0 - p) / (p - 1.0))
                }
            }
        }
    }

    /// Draws a delay from the normalised offspring density `mu(s) / n`.
    ///
    /// The exponential case is `Exp(beta)`; the power-law case inverts the
    /// CDF `1 - (c / (c + s))^(p - 1)`.
    pub fn sample_offspring_delay<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let n = self.branching_ratio()?;
        if !(n > 0.0) {
            return Err(HawkesError::InvalidParameter(
                "offspring density undefined for a zero kernel".into(),
            ));
        }
        Ok(self.offspring_delay_unchecked(rng))
    }

    pub(crate) fn offspring_delay_unchecked<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            // 1 - U lies in (0, 1]; reject the zero draw so the delay is > 0.
            let u: f64 = 1.0 - rng.gen::<f64>();
            let s = match *self {
                ExcitationKernel::Exp(ExpKernel { beta, .. }) => -u.ln() / beta,
                ExcitationKernel::PowerLaw(PowerLawKernel { c, p, .. }) => {
                    c * (-(u.ln()) / (p - 1.0)).exp_m1()
                }
            };
            if s > 0.0 && s.is_finite() {
                return s;
            }
        }
    }

    /// The decay rate used by the optional initial-condition term.
    pub(crate) fn exp_beta(&self) -> Option<f64> {
        self.as_exp().map(|k| k.beta)
    }
}
