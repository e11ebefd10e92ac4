//! Band spectra, zero-temperature Casimir energy and finite-temperature
//! Casimir thermodynamics of a scalar field on a comb: a background that is
//! periodic in one direction, built by repeating a compact node potential
//! at spacing `a`.
//!
//! Layering, bottom to top:
//!
//! - [`numerics`]: adaptive quadrature, bracketed roots, finite differences.
//! - [`specialfn`]: complex polylogarithms and the branched power
//!   `(m² + k²)^{3/2}`.
//! - [`scattering`]: closed-form scattering data of the node potentials.
//! - [`spectrum`]: Bloch discriminant, bands, negative band and mass.
//! - [`vacuum`]: the regularized vacuum energy per unit area.
//! - [`thermal`]: free energy, entropy and pressure at temperature `T`.
//! - [`oracle`]: independent brute-force verifiers.

mod contour;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod scattering;
pub mod specialfn;
pub mod spectrum;
pub mod thermal;
pub mod vacuum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scattering::{CombModel, NodePotential};
pub use vacuum::ContourSpec;
