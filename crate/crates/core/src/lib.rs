//! Hawkes self-exciting point processes.
//!
//! * [`kernel`]: exponential and power-law excitation functions
//! * [`intensity`]: conditional intensity, compensator, decay recursion
//! * [`simulate`]: thinning, cluster and inversion simulators
//! * [`estimate`]: direct and recursive log-likelihood, maximum likelihood fit
//! * [`gof`]: residual analysis and Poissonity tests
//! * [`spectral`]: covariance density and power spectral density
//! * [`cli`]: the `hawkes` command line

// Guards like `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimate;
pub mod gof;
pub mod intensity;
pub mod kernel;
pub mod rng;
pub mod simulate;
pub mod spectral;

pub use error::{HawkesError, Result};
pub use intensity::{EventSequence, HawkesModel, MultivariateHawkesModel};
pub use kernel::{ExcitationKernel, ExpKernel, PowerLawKernel};
