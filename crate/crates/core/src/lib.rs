//! Eigenstructure of the linearized electrical impedance tomography operator
//! on the unit ball for radially symmetric conductivity perturbations.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: log-gamma, factorial ratios, Gauss-Legendre rules.
//! * [`jacobi`]: the orthonormal radial basis `P_k` and monomial expansions.
//! * [`radial`]: piecewise-polynomial profiles and their `P_k` coefficients.
//! * [`spectral`]: eigenvalues, decay bounds, truncation and inversion.
//! * [`oracle`]: brute-force quadrature of the defining bilinear form with
//!   explicit harmonics in two and three dimensions.
//! * [`cli`]: the `radial-eit` command-line front end.

pub mod cli;
pub mod dimension;
pub mod error;
pub mod jacobi;
pub mod numerics;
pub mod oracle;
pub mod radial;
pub mod spectral;

pub use dimension::Dimension;
pub use error::{Error, Result};
