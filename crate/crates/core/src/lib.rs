//! Spectral toolkit for fractional functional inequalities.
//!
//! The crate discretizes `R^n` (n = 1, 2, 3) by a periodic box and provides:
//!
//! - [`spectral`]: grids, sampled fields, the continuous-convention Fourier
//!   transform and the multiplier operators built on it (fractional
//!   Laplacian, Bessel and Riesz potentials), norms and Dirichlet energies.
//! - [`rearrange`]: Schwarz symmetric decreasing rearrangement on the grid and
//!   the symmetry / decay diagnostics that go with it.
//! - [`inequalities`]: numerical certificates for the fractional Polya-Szegő,
//!   Gagliardo–Nirenberg and Sobolev inequalities, the binomial multiplier
//!   series, the Bessel pairing and the mollifier convergence diagnostic.
//! - [`nonlinearity`]: the weighted power family `F(r, u)` and a sampler that
//!   checks the structural assumptions placed on it.
//! - [`minimizer`]: energy, gradient, sphere projection and the normalized
//!   gradient flow for the mass-constrained ground state problem, plus the
//!   critical-mass and supercritical probes.
//! - [`cli`]: the `fraclab` command line front end and batch runner.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod generators;
pub mod inequalities;
pub mod minimizer;
pub mod nonlinearity;
pub mod rearrange;
pub mod record;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{Field, Grid, Spectrum};
