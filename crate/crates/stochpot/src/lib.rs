//! Potential theory and Gaussian-random-field perturbations of harmonic functions,
//! with Monte Carlo, quadrature and walk-on-spheres oracles.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod grf;
pub mod harmonic;
pub mod mc;
pub mod potentials;
pub mod report;
pub mod stochastic;
pub mod wos;

pub use error::{Error, Result};
pub use geometry::{build_grid, build_spectral_grid, Domain, DomainGrid, MeasureKind, Point};
pub use grf::{CovKernel, FieldSample};
pub use mc::Estimate;
