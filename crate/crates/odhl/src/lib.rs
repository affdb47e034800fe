//! Pseudo-spectral simulation of two 2-D compressible systems on a large
//! periodic box, an Oldroyd-B viscoelastic fluid and Hall-MHD, together
//! with the harmonic-analysis diagnostics (dyadic block norms, negative-index
//! Besov seminorms, frequency-split low-frequency energies, energy/dissipation
//! functionals) needed to measure their long-time decay rates.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod expm;
pub mod fft;
pub mod field;
pub mod grid;
pub mod hallmhd;
pub mod initial_data;
pub mod integrator;
pub mod lp;
pub mod model;
pub mod oldroyd;
pub mod propagator;
pub mod snapshot;

pub use error::{Error, Result};
pub use fft::Fft2;
pub use field::{dealiased_product, perp_curl2d, SpectralField, SymTensorField, VectorField};
pub use grid::Grid;
pub use lp::FilterBank;
