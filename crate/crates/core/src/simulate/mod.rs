//! Exact simulation of Hawkes processes.
//!
//! Three independent univariate simulators are provided (Ogata thinning,
//! immigrant-cluster superposition, compensator inversion) together with the
//! inhomogeneous Poisson thinning building block and a multivariate thinning
//! variant. All of them are pure functions of their parameters and the
//! supplied random stream.

mod cluster;
mod inversion;
mod multivariate;
mod thinning;
mod tracker;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use cluster::{hawkes_by_clusters, hawkes_by_clusters_with};
pub use inversion::{hawkes_by_inversion, hawkes_by_inversion_with};
pub use multivariate::{multivariate_by_thinning, multivariate_by_thinning_with};
pub use thinning::{hawkes_by_thinning, hawkes_by_thinning_with, poisson_by_thinning};

use crate::error::{HawkesError, Result};
use crate::intensity::{EventSequence, HawkesModel};

/// How deep the cluster simulator expands each immigrant's family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterDepth {
    /// Every generation, which is the exact immigration-birth construction.
    Recursive,
    /// Only the immigrants' direct children. Not a Hawkes process; kept for
    /// comparison with the one-level textbook listing.
    FirstGeneration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Offset at which the thinning bound `lambda*(t + epsilon)` is taken.
    pub epsilon: f64,
    pub cluster_depth: ClusterDepth,
    /// Relative tolerance on the compensator increment when inverting.
    pub root_tolerance: f64,
    pub max_root_iterations: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-10,
            cluster_depth: ClusterDepth::Recursive,
            root_tolerance: 1e-12,
            max_root_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Thinning,
    Cluster,
    Inversion,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Thinning, Algorithm::Cluster, Algorithm::Inversion];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Thinning => "thinning",
            Algorithm::Cluster => "cluster",
            Algorithm::Inversion => "inversion",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = HawkesError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thinning" => Ok(Algorithm::Thinning),
            "cluster" | "clusters" => Ok(Algorithm::Cluster),
            "inversion" => Ok(Algorithm::Inversion),
            other => Err(HawkesError::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Runs the chosen simulator.
pub fn simulate<R: Rng + ?Sized>(
    algorithm: Algorithm,
    horizon: f64,
    model: &HawkesModel,
    rng: &mut R,
    config: &SimulationConfig,
) -> Result<EventSequence> {
    match algorithm {
        Algorithm::Thinning => hawkes_by_thinning_with(horizon, model, rng, config),
        Algorithm::Cluster => hawkes_by_clusters_with(horizon, model, rng, config),
        Algorithm::Inversion => hawkes_by_inversion_with(horizon, model, rng, config),
    }
}
