//! Numerical toolkit for Toeplitz operators with quasicontinuous symbols:
//! circle Fourier analysis, Hilbert and Poisson transforms, BMO/VMO
//! oscillation, symbol factorization and winding numbers, and
//! finite-section experiments.

pub mod circle_fourier;
pub mod config;
pub mod error;
pub mod fredholm;
pub mod oscillation;
pub mod symbol;
pub mod toeplitz;
pub mod transforms;
pub mod verify;

pub use circle_fourier::{CircleGrid, FourierSeries, GridFunction};
pub use config::Thresholds;
pub use error::{Error, Result};
pub use symbol::SymbolSpec;
