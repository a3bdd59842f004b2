use crate::spectral::{inverse_transform, lp_norm, transform};
use crate::{Error, Field, Grid, Result};

/// `φ^ℓ(x) = ℓ^n φ(ℓx)` sampled on `grid`, where `φ` is the standard smooth
/// bump supported in the unit ball, normalized so its discrete integral is 1.
pub fn mollifier(grid: Grid, level: f64) -> Result<Field> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::param(
            "level",
            format!("must be positive, got {level}"),
        ));
    }
    let raw = Field::from_radial(grid, |r| {
        let t = r * level;
        if t < 1.0 {
            (-1.0 / (1.0 - t * t)).exp()
        } else {
            0.0
        }
    })?;
    let mass = raw.integral();
    if !(mass > 0.0) {
        return Err(Error::param(
            "level",
            format!("support of radius 1/{level} misses every grid point"),
        ));
    }
    Ok(raw.scale(1.0 / mass))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactnessReport {
    pub s: f64,
    pub levels: Vec<f64>,
    /// `‖φ^ℓ * G_s - G_s‖₁` per level.
    pub norms: Vec<f64>,
    /// Discrete integral of each `φ^ℓ`.
    pub mollifier_integrals: Vec<f64>,
    pub strictly_decreasing: bool,
}

impl CompactnessReport {
    /// Last norm over first norm.
    pub fn reduction(&self) -> f64 {
        match (self.norms.first(), self.norms.last()) {
            (Some(a), Some(b)) if *a > 0.0 => b / a,
            _ => f64::NAN,
        }
    }
}

/// `‖φ^ℓ * G_s - G_s‖_{L¹}` for each mollifier level, with the Bessel kernel
/// `G_s` realized by its symbol `(1+|ξ|²)^{-s/2}` on `grid`.
pub fn compactness_diagnostic(grid: Grid, s: f64, levels: &[f64]) -> Result<CompactnessReport> {
    let n = grid.dim() as f64;
    if !(s > 0.0 && s < n) {
        return Err(Error::param("s", format!("need 0 < s < n = {n}, got {s}")));
    }
    if levels.is_empty() {
        return Err(Error::param("levels", "need at least one level"));
    }
    if levels.iter().any(|&l| !(l > 0.0)) || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(
            "levels",
            "levels must be positive and increasing",
        ));
    }
    let mut norms = Vec::with_capacity(levels.len());
    let mut integrals = Vec::with_capacity(levels.len());
    for &level in levels {
        let phi = mollifier(grid, level)?;
        integrals.push(phi.integral());
        let mut spec = transform(&phi);
        let g = grid;
        for (k, c) in spec.coefficients_mut().iter_mut().enumerate() {
            let symbol = (1.0 + g.xi_sq(k)).powf(-s / 2.0);
            *c = (*c - 1.0) * symbol;
        }
        norms.push(lp_norm(&inverse_transform(&spec), 1.0)?);
    }
    Ok(CompactnessReport {
        s,
        levels: levels.to_vec(),
        strictly_decreasing: norms.windows(2).all(|w| w[1] < w[0]),
        norms,
        mollifier_integrals: integrals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuum_normalization_is_recovered() {
        // ℓ^n φ(ℓx) integrates to ℓ^0 times ∫_{-1}^{1} exp(-1/(1-x²)) dx
        let g = Grid::new(1, 4096, 8.0).unwrap();
        let phi = mollifier(g, 1.0).unwrap();
        let peak = phi.values()[2048];
        assert!((peak * 0.443_993_816_168_079_4 - (-1.0f64).exp()).abs() < 1e-9);
        assert!((phi.integral() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_levels() {
        let g = Grid::new(1, 256, 10.0).unwrap();
        assert!(compactness_diagnostic(g, 0.5, &[2.0, 1.0]).is_err());
        assert!(compactness_diagnostic(g, 0.5, &[]).is_err());
        assert!(compactness_diagnostic(g, 1.5, &[1.0]).is_err());
        assert!(mollifier(g, 0.0).is_err());
    }
}
