//! Periodic-box discretization of `R^n` and Fourier multiplier operators.
//!
//! Transform convention: `f^(ξ) = ∫ f(x) e^{-i x·ξ} dx`, discretized as
//! `Δx^n Σ_j u_j e^{-i x_j·ξ_k}`. The inverse carries `(2π)^{-n} Δξ^n`, which
//! on a box of edge `L` is simply `L^{-n}`. With this pairing the round trip is
//! exact and Parseval reads `Δx^n Σ|u|² = L^{-n} Σ|û|²`.

mod fft;
mod field;
mod grid;
pub mod io;
mod operators;

pub use field::{Field, Spectrum};
pub use grid::Grid;
pub use operators::{
    apply_multiplier, bessel_potential, dirichlet_energy, fractional_laplacian, inverse_transform,
    lp_norm, riesz_potential, transform,
};
pub(crate) use operators::{require_dim, symbol_power};
