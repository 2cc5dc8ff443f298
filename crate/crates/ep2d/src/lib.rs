//! Pseudo-spectral simulation and verification laboratory for the 2D
//! Euler-Poisson electron fluid near the constant equilibrium (n, v) = (1, 0).
//!
//! The unknown is evolved in the diagonalized complex variable
//! U = Lambda |nabla|^{-1} rho + i |nabla| h, with Lambda(xi) = sqrt(a|xi|^2 + b),
//! on a large periodic box serving as a proxy for the plane. The crate provides
//! the spectral calculus (FFT multipliers, dyadic partitions), the model
//! nonlinearity in both physical-product and frequency-quadrature form, the
//! dispersive norms (Z, Z', Y), weighted energies, the normal-form profile W,
//! an integrating-factor RK4 stepper, and a suite of numerical checks.

pub mod cli;
pub mod config;
pub mod cutoff;
pub mod dispersion;
pub mod field;
pub mod grid;
pub mod io;
pub mod ledger;
pub mod model;
pub mod normal_form;
pub mod norms;
pub mod report;
pub mod stepper;
pub mod svg;
pub mod verify;

pub use field::{Representation, SpectralField};
pub use grid::Grid;
pub use model::{ComplexUnknown, PerturbationState};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
