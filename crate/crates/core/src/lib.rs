//! Schmidt decomposition of discretized bipartite continuous-variable states.
//!
//! The crate covers the whole pipeline from a two-variable amplitude
//! `psi(x1, x2)` to its Schmidt spectrum and the quantities derived from it:
//!
//! - [`gaussian_model`]: closed-form Schmidt spectrum, Hermite-function modes,
//!   entropy and mutual information of the bivariate normal amplitude
//!   `psi = sqrt(p)`. Used as the exact reference for everything numeric.
//! - [`discretize`]: uniform midpoint grids, normalized amplitude matrices,
//!   marginals and grid-based Shannon mutual information.
//! - [`schmidt`]: SVD-based Schmidt spectrum, Schmidt number, entanglement
//!   entropy and truncated reconstruction.
//! - [`information`]: Schmidt information, accidental coincidence probability
//!   and effective microstate count.
//! - [`thermo`]: mapping between the geometric spectrum and a thermal
//!   oscillator at inverse temperature `beta = hbar*omega/theta`.
//! - [`epr_sim`]: seeded Monte Carlo of two independent symbol sources.
//!
//! Row sampling, grid sums and Monte Carlo trials run on rayon when the
//! `parallel` feature is enabled (the default). Results are bit-identical to
//! the sequential path; see [`Execution`].

// Range checks are written as `!(x < bound)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discretize;
pub mod epr_sim;
mod error;
mod exec;
pub mod gaussian_model;
pub mod information;
mod numeric;
pub mod schmidt;
pub mod state_file;
pub mod svd;
pub mod thermo;

pub use error::{Error, Result};
pub use exec::Execution;
pub use numeric::{neumaier_sum, LogBase};

pub use discretize::{build_grid, marginals, sample_state, shannon_mi_numeric, DiscretizedState, GridSpec};
pub use epr_sim::{run_coincidence_experiment, sample_stream, CoincidenceReport};
pub use gaussian_model::{GaussianParams, GeometricSpectrum};
pub use information::{InfoReport, Microstates};
pub use schmidt::{decompose, entanglement_entropy, reconstruct, schmidt_number, SchmidtSpectrum};
pub use thermo::ThermoPoint;
