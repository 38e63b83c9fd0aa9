use crate::intensity::HawkesModel;
use crate::kernel::ExcitationKernel;

/// Running excitation `sum_i mu(t - t_i)` over recorded arrivals.
///
/// Exponential kernels keep a single decayed level, so every query is O(1).
/// Other kernels keep the full history.
pub(crate) enum ExcitationTracker {
    Exp { alpha: f64, beta: f64, last: f64, level: f64 },
    General { kernel: ExcitationKernel, past: Vec<f64> },
}

impl ExcitationTracker {
    pub fn new(model: &HawkesModel) -> Self {
        match model.exp_params() {
            Some((alpha, beta)) => Self::Exp { alpha, beta, last: 0.0, level: 0.0 },
            None => Self::General { kernel: *model.kernel(), past: Vec::new() },
        }
    }

    /// Excitation at `t`, which must not precede the last recorded arrival.
    /// Arrivals recorded at exactly `t` are included.
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        match self {
            Self::Exp { beta, last, level, .. } => level * (-beta * (t - last)).exp(),
            Self::General { kernel, past } => {
                past.iter().map(|&s| kernel.excite_unchecked(t - s)).sum()
            }
        }
    }

    /// `int_from^to` of the excitation, with no arrivals in between.
    pub fn integral(&self, from: f64, to: f64) -> f64 {
        match self {
            Self::Exp { beta, last, level, .. } => {
                let start = level * (-beta * (from - last)).exp();
                -(start / beta) * (-beta * (to - from)).exp_m1()
            }
            Self::General { kernel, past } => past
                .iter()
                .map(|&s| kernel.integral(to - s) - kernel.integral(from - s))
                .sum(),
        }
    }

    pub fn record(&mut self, t: f64) {
        match self {
            Self::Exp { alpha, beta, last, level } => {
                *level = *level * (-*beta * (t - *last)).exp() + *alpha;
                *last = t;
            }
            Self::General { past, .. } => past.push(t),
        }
    }
}
