use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft_nd;
use super::{Field, Grid, Spectrum};
use crate::{Error, Result};

/// Relative size of `|û(0)|` (against `L^{n/2}‖f‖₂`) below which a field counts as mean-zero.
const MEAN_ZERO_TOL: f64 = 1e-12;

/// Forward transform, `û_k = Δx^n Σ_j u_j e^{-i x_j·ξ_k}`.
pub fn transform(u: &Field) -> Spectrum {
    let g = *u.grid();
    let mut data: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut data, g.dim(), g.points(), FftDirection::Forward);
    let dv = g.cell_volume();
    for (k, c) in data.iter_mut().enumerate() {
        *c *= dv * g.phase_sign(k);
    }
    Spectrum::from_parts_unchecked(g, data)
}

/// Inverse transform, `u_j = L^{-n} Σ_k û_k e^{i x_j·ξ_k}`; keeps the real part.
pub fn inverse_transform(spectrum: &Spectrum) -> Field {
    let g = *spectrum.grid();
    let mut data: Vec<Complex64> = spectrum
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| c * g.phase_sign(k))
        .collect();
    fft_nd(&mut data, g.dim(), g.points(), FftDirection::Inverse);
    let norm = 1.0 / g.volume();
    Field::from_parts_unchecked(g, data.iter().map(|c| c.re * norm).collect())
}

/// Applies the Fourier multiplier `m(|ξ|²)`.
pub fn apply_multiplier(u: &Field, m: impl Fn(f64) -> f64) -> Field {
    let mut spec = transform(u);
    spec.apply(m);
    inverse_transform(&spec)
}

/// `(-Δ)^{s/2} u`, multiplier `|ξ|^s`.
///
/// `s = 0` is the identity (including the zero mode); for `s > 0` the zero mode is annihilated.
pub fn fractional_laplacian(u: &Field, s: f64) -> Result<Field> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::param(
            "s",
            format!(
                "fractional order must be >= 0, got {s} (use riesz_potential for negative orders)"
            ),
        ));
    }
    if s == 0.0 {
        return Ok(u.clone());
    }
    Ok(apply_multiplier(u, |xi2| symbol_power(xi2, s)))
}

/// `(1 + |ξ|²)^{-α/2}` applied to `u`.
pub fn bessel_potential(u: &Field, alpha: f64) -> Result<Field> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param(
            "alpha",
            format!("Bessel order must be > 0, got {alpha}"),
        ));
    }
    Ok(apply_multiplier(u, |xi2| (1.0 + xi2).powf(-alpha / 2.0)))
}

/// Riesz potential `(-Δ)^{-s/2} f` for mean-zero `f`, `0 < s < n`.
///
/// Nonzero modes are multiplied by `|ξ|^{-s}`, the zero mode is set to zero.
pub fn riesz_potential(f: &Field, s: f64) -> Result<Field> {
    let g = *f.grid();
    let n = g.dim() as f64;
    if !(s > 0.0 && s < n) {
        return Err(Error::param(
            "s",
            format!("Riesz order must lie in (0, {n}), got {s}"),
        ));
    }
    let mut spec = transform(f);
    let zero = spec.coefficients()[0].norm();
    let allowed = MEAN_ZERO_TOL * g.volume().sqrt() * lp_norm(f, 2.0)?;
    if zero > allowed {
        return Err(Error::ZeroModeLoss {
            coefficient: zero,
            allowed,
        });
    }
    spec.apply(|xi2| if xi2 == 0.0 { 0.0 } else { xi2.powf(-s / 2.0) });
    Ok(inverse_transform(&spec))
}

/// `(Δx^n Σ |u_j|^t)^{1/t}` for any `t ≠ 0`.
///
/// Terms are summed in ascending order, so fields with the same value
/// multiset give bitwise identical norms.
pub fn lp_norm(u: &Field, t: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::param(
            "t",
            format!("exponent must be finite and nonzero, got {t}"),
        ));
    }
    let mut terms: Vec<f64> = Vec::with_capacity(u.values().len());
    for &v in u.values() {
        let a = v.abs();
        if t < 0.0 && a == 0.0 {
            return Err(Error::param("t", "negative exponent with a zero value"));
        }
        terms.push(if t == 2.0 { a * a } else { a.powf(t) });
    }
    terms.sort_by(f64::total_cmp);
    let sum: f64 = terms.iter().sum();
    Ok((sum * u.grid().cell_volume()).powf(1.0 / t))
}

/// `‖(-Δ)^{s/2} u‖₂² = L^{-n} Σ |ξ|^{2s} |û|²`; equals `‖u‖₂²` at `s = 0`.
pub fn dirichlet_energy(u: &Field, s: f64) -> Result<f64> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::param(
            "s",
            format!("fractional order must be >= 0, got {s}"),
        ));
    }
    if s == 0.0 {
        return Ok(lp_norm(u, 2.0)?.powi(2));
    }
    Ok(transform(u).weighted_energy(|xi2| symbol_power(xi2, 2.0 * s)))
}

/// `|ξ|^s` from `|ξ|²`, with `0^s = 0` for `s > 0`.
pub(crate) fn symbol_power(xi2: f64, s: f64) -> f64 {
    if xi2 == 0.0 {
        0.0
    } else {
        xi2.powf(s / 2.0)
    }
}

/// Shared check for grid dimension against an exponent's admissible range.
pub(crate) fn require_dim(grid: &Grid, n: usize) -> Result<()> {
    if grid.dim() != n {
        return Err(Error::GridMismatch(format!(
            "field lives on a {}-dimensional grid, indices are for n = {n}",
            grid.dim()
        )));
    }
    Ok(())
}
