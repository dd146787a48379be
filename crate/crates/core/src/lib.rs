//! Hard-core bosons on a one-dimensional lattice through their free-fermion
//! representation: single-particle spectra, two-point functions, four-point
//! functions from string determinants and momentum-space noise correlations,
//! with an exact-diagonalisation oracle for small systems.

pub mod bench;
pub mod error;
pub mod fourier;
pub mod fourpoint;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod oracle_check;
pub mod pipeline;
pub mod presets;
pub mod scenario;
pub mod spectral;
pub mod twopoint;

pub use error::{Error, Result};
pub use scenario::{Boundary, LatticeScenario, Normalization, Potential};
