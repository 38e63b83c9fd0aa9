use serde::{Deserialize, Serialize, Serializer};

use crate::error::{HawkesError, Result};
use crate::kernel::{ExcitationKernel, ExpKernel, PowerLawKernel};

/// A univariate Hawkes process: background rate plus excitation kernel.
///
/// `initial_intensity` optionally sets `lambda*(0) = lambda_0` by adding the
/// transient `(lambda_0 - lambda) * exp(-beta t)`; it is only defined for the
/// exponential kernel.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct HawkesModel {
    baseline: f64,
    kernel: ExcitationKernel,
    initial_intensity: Option<f64>,
}

impl HawkesModel {
    pub fn new(baseline: f64, kernel: impl Into<ExcitationKernel>) -> Result<Self> {
        if !(baseline.is_finite() && baseline > 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "baseline must be finite and > 0, got {baseline}"
            )));
        }
        Ok(Self { baseline, kernel: kernel.into(), initial_intensity: None })
    }

    /// Shorthand for the exponential-kernel model `(lambda, alpha, beta)`.
    pub fn exponential(baseline: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(baseline, ExpKernel::new(alpha, beta)?)
    }

    pub fn power_law(baseline: f64, k: f64, c: f64, p: f64) -> Result<Self> {
        Self::new(baseline, PowerLawKernel::new(k, c, p)?)
    }

    pub fn with_initial_intensity(mut self, lambda0: f64) -> Result<Self> {
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(HawkesError::InvalidParameter(format!(
                "initial intensity must be finite and > 0, got {lambda0}"
            )));
        }
        if self.kernel.as_exp().is_none() {
            return Err(HawkesError::Unsupported(
                "initial intensity requires an exponential kernel".into(),
            ));
        }
        self.initial_intensity = Some(lambda0);
        Ok(self)
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn kernel(&self) -> &ExcitationKernel {
        &self.kernel
    }

    pub fn initial_intensity(&self) -> Option<f64> {
        self.initial_intensity
    }

    /// `(alpha, beta)` when the kernel is exponential.
    pub fn exp_params(&self) -> Option<(f64, f64)> {
        self.kernel.as_exp().map(|k| (k.alpha(), k.beta()))
    }

    pub(crate) fn require_exp(&self) -> Result<(f64, f64)> {
        self.exp_params()
            .ok_or_else(|| HawkesError::Unsupported("operation requires an exponential kernel".into()))
    }

    pub fn branching_ratio(&self) -> Result<f64> {
        self.kernel.branching_ratio()
    }

    /// True when the branching ratio is finite and below one.
    pub fn is_stationary(&self) -> bool {
        matches!(self.branching_ratio(), Ok(n) if n < 1.0)
    }

    pub(crate) fn require_stationary(&self) -> Result<f64> {
        let n = self.branching_ratio()?;
        if n < 1.0 {
            Ok(n)
        } else {
            Err(HawkesError::NonStationary { branching_ratio: n })
        }
    }

    /// `(lambda_0 - lambda) * exp(-beta t)`, zero unless an initial intensity is set.
    #[inline]
    pub(crate) fn transient(&self, t: f64) -> f64 {
        match (self.initial_intensity, self.kernel.exp_beta()) {
            (Some(l0), Some(beta)) => (l0 - self.baseline) * (-beta * t).exp(),
            _ => 0.0,
        }
    }

    /// `int_0^t` of [`Self::transient`].
    #[inline]
    pub(crate) fn transient_integral(&self, t: f64) -> f64 {
        match (self.initial_intensity, self.kernel.exp_beta()) {
            (Some(l0), Some(beta)) => -(l0 - self.baseline) * (-beta * t).exp_m1() / beta,
            _ => 0.0,
        }
    }
}

#[derive(Deserialize)]
struct RawModel {
    lambda: f64,
    #[serde(rename = "type")]
    kind: Option<String>,
    alpha: Option<f64>,
    beta: Option<f64>,
    k: Option<f64>,
    c: Option<f64>,
    p: Option<f64>,
    lambda0: Option<f64>,
}

fn field(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| HawkesError::InvalidParameter(format!("missing field `{name}`")))
}

impl TryFrom<RawModel> for HawkesModel {
    type Error = HawkesError;

    // A missing `type` means exponential, so fitted-parameter files can be
    // fed back in as model files.
    fn try_from(raw: RawModel) -> Result<Self> {
        let kernel = match raw.kind.as_deref().unwrap_or("exp") {
            "exp" => ExcitationKernel::exp(field(raw.alpha, "alpha")?, field(raw.beta, "beta")?)?,
            "powerlaw" => ExcitationKernel::power_law(
                field(raw.k, "k")?,
                field(raw.c, "c")?,
                field(raw.p, "p")?,
            )?,
            other => {
                return Err(HawkesError::InvalidParameter(format!("unknown kernel type `{other}`")))
            }
        };
        let model = HawkesModel::new(raw.lambda, kernel)?;
        match raw.lambda0 {
            Some(l0) => model.with_initial_intensity(l0),
            None => Ok(model),
        }
    }
}

impl Serialize for HawkesModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Flat<'a> {
            lambda: f64,
            #[serde(flatten)]
            kernel: &'a ExcitationKernel,
            #[serde(skip_serializing_if = "Option::is_none")]
            lambda0: Option<f64>,
        }
        Flat { lambda: self.baseline, kernel: &self.kernel, lambda0: self.initial_intensity }
            .serialize(serializer)
    }
}
