//! Time-splitting Fourier pseudospectral solvers for the two-component Dirac
//! equation with an electric potential, plus the symbolic machinery that
//! derives the compact sixth-order coefficients.

pub mod error;
pub mod harness;
pub mod lie;
pub mod model;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
