use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::EventSequence;
use crate::error::{HawkesError, Result};

/// Mutually exciting process with exponential cross-kernels.
///
/// `alphas[i][j]` and `betas[i][j]` describe how an arrival in component `j`
/// raises the intensity of component `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMultivariate")]
pub struct MultivariateHawkesModel {
    baselines: Vec<f64>,
    alphas: Vec<Vec<f64>>,
    betas: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawMultivariate {
    baselines: Vec<f64>,
    alphas: Vec<Vec<f64>>,
    betas: Vec<Vec<f64>>,
}

impl TryFrom<RawMultivariate> for MultivariateHawkesModel {
    type Error = HawkesError;
    fn try_from(raw: RawMultivariate) -> Result<Self> {
        MultivariateHawkesModel::new(raw.baselines, raw.alphas, raw.betas)
    }
}

impl MultivariateHawkesModel {
    pub fn new(baselines: Vec<f64>, alphas: Vec<Vec<f64>>, betas: Vec<Vec<f64>>) -> Result<Self> {
        let m = baselines.len();
        if m == 0 {
            return Err(HawkesError::InvalidParameter("model needs at least one component".into()));
        }
        let square = |rows: &[Vec<f64>]| rows.len() == m && rows.iter().all(|r| r.len() == m);
        if !square(&alphas) || !square(&betas) {
            return Err(HawkesError::InvalidParameter(format!(
                "alphas and betas must both be {m}x{m}"
            )));
        }
        if let Some(l) = baselines.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(HawkesError::InvalidParameter(format!("baseline {l} must be > 0")));
        }
        for (i, (arow, brow)) in alphas.iter().zip(&betas).enumerate() {
            for j in 0..m {
                if !(arow[j].is_finite() && arow[j] >= 0.0) {
                    return Err(HawkesError::InvalidParameter(format!(
                        "alpha[{i}][{j}] = {} must be >= 0",
                        arow[j]
                    )));
                }
                if !(brow[j].is_finite() && brow[j] > 0.0) {
                    return Err(HawkesError::InvalidParameter(format!(
                        "beta[{i}][{j}] = {} must be > 0",
                        brow[j]
                    )));
                }
            }
        }
        Ok(Self { baselines, alphas, betas })
    }

    /// Same `lambda`, `alpha` and `beta` for every component and pair.
    pub fn symmetric(m: usize, baseline: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(vec![baseline; m], vec![vec![alpha; m]; m], vec![vec![beta; m]; m])
    }

    pub fn dim(&self) -> usize {
        self.baselines.len()
    }

    pub fn baselines(&self) -> &[f64] {
        &self.baselines
    }

    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alphas[i][j]
    }

    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.betas[i][j]
    }

    /// Matrix of pairwise branching ratios `alpha[i][j] / beta[i][j]`.
    pub fn branching_matrix(&self) -> DMatrix<f64> {
        let m = self.dim();
        DMatrix::from_fn(m, m, |i, j| self.alphas[i][j] / self.betas[i][j])
    }

    pub fn spectral_radius(&self) -> f64 {
        self.branching_matrix()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.spectral_radius() < 1.0
    }

    pub(crate) fn require_stable(&self) -> Result<()> {
        let rho = self.spectral_radius();
        if rho < 1.0 {
            Ok(())
        } else {
            Err(HawkesError::NonStationary { branching_ratio: rho })
        }
    }

    /// `lambda*_i(t)` using arrivals strictly before `t` in every component.
    pub fn intensity(&self, events: &[EventSequence], i: usize, t: f64) -> Result<f64> {
        let m = self.dim();
        if i >= m {
            return Err(HawkesError::ComponentOutOfRange { index: i, dimension: m });
        }
        if events.len() != m {
            return Err(HawkesError::InvalidEvents(format!(
                "expected {m} event streams, got {}",
                events.len()
            )));
        }
        let mut rate = self.baselines[i];
        for (j, stream) in events.iter().enumerate() {
            let (a, b) = (self.alphas[i][j], self.betas[i][j]);
            if a == 0.0 {
                continue;
            }
            let past = &stream.times()[..stream.count_before(t)];
            rate += a * past.iter().map(|&s| (-b * (t - s)).exp()).sum::<f64>();
        }
        Ok(rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_radius_of_symmetric_model() {
        let m = MultivariateHawkesModel::symmetric(2, 1.0, 2.0, 8.0).unwrap();
        assert!((m.spectral_radius() - 0.5).abs() < 1e-12);
        assert!(m.is_stable());
    }

    #[test]
    fn spectral_radius_of_rotation_like_matrix() {
        // Power iteration would oscillate on this one.
        let m = MultivariateHawkesModel::new(
            vec![1.0, 1.0],
            vec![vec![0.0, 1.5], vec![1.5, 0.0]],
            vec![vec![1.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        assert!((m.spectral_radius() - 1.5).abs() < 1e-12);
        assert!(!m.is_stable());
    }

    #[test]
    fn reduces_to_univariate_ratio() {
        let m = MultivariateHawkesModel::symmetric(1, 0.5, 2.0, 2.1).unwrap();
        assert!((m.spectral_radius() - 2.0 / 2.1).abs() < 1e-14);
    }

    #[test]
    fn shape_validation() {
        assert!(MultivariateHawkesModel::new(vec![1.0, 1.0], vec![vec![0.0; 2]], vec![vec![1.0; 2]; 2])
            .is_err());
        assert!(MultivariateHawkesModel::new(vec![], vec![], vec![]).is_err());
        assert!(MultivariateHawkesModel::new(vec![1.0], vec![vec![-1.0]], vec![vec![1.0]]).is_err());
    }
}
