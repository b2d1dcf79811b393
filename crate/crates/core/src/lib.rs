//! Kolmogorov and harmonic widths of polyharmonic ellipsoids.
//!
//! The crate builds principal-axes eigenmodels for two sets:
//!
//! * `K_p = { f on [0,1] : ||f^(p)||_2 <= 1 }`, through a Legendre–Galerkin
//!   discretization with the polynomial kernel deflated exactly
//!   ([`kolmogorov1d`]);
//! * `K_p* = { f on the unit disk : ||Δ^p f||_2 <= 1 }`, through per-angular-mode
//!   clamped `Δ^{2p}` eigenproblems whose eigenfunctions generate the axes
//!   `ψ = Δ^p φ / sqrt(λ)` ([`disk`]).
//!
//! [`widths`] computes Jackson bounds, Kolmogorov and harmonic widths with
//! certificates over either model, and [`chebyshev`] analyses one-dimensional
//! ECT systems through their Wronskians.

pub mod basis;
pub mod chebyshev;
pub mod ellipticity;
pub mod error;
pub mod matrix_json;
pub mod pencil;
pub mod quadrature;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub mod disk;
pub mod kolmogorov1d;
pub mod widths;
