//! Mass-constrained minimization of
//! `E(u) = ‖(-Δ)^{s/2} u‖² - ∫ F(|x|, u) dx` on the sphere `‖u‖₂ = c`.

mod config;
mod flow;
mod probes;

pub use config::{parse_config, SolverConfig};
pub use flow::{minimize, MinimizerReport, StopReason};
pub use probes::{
    mass_threshold_probe, supercritical_probe, MassProbeReport, MassProbeRow, SupercriticalReport,
};

use num_complex::Complex64;

use crate::nonlinearity::NonlinearitySpec;
use crate::spectral::{inverse_transform, lp_norm, require_dim, symbol_power, transform};
use crate::{Error, Field, Grid, Result, Spectrum};

/// Per-grid tables shared by energy, gradient and energy differences.
pub(crate) struct EnergyModel {
    grid: Grid,
    spec: NonlinearitySpec,
    radii: Vec<f64>,
    symbol: Vec<f64>,
}

impl EnergyModel {
    pub(crate) fn new(grid: Grid, spec: &NonlinearitySpec) -> Result<Self> {
        require_dim(&grid, spec.n)?;
        let radii = (0..grid.len()).map(|j| grid.radius(j)).collect();
        let symbol = (0..grid.len())
            .map(|k| symbol_power(grid.xi_sq(k), 2.0 * spec.s))
            .collect();
        Ok(EnergyModel {
            grid,
            spec: *spec,
            radii,
            symbol,
        })
    }

    pub(crate) fn grid(&self) -> &Grid {
        &self.grid
    }

    fn check(&self, u: &Field) -> Result<()> {
        if *u.grid() != self.grid {
            return Err(Error::GridMismatch(format!(
                "field on {} but model on {}",
                u.grid(),
                self.grid
            )));
        }
        Ok(())
    }

    pub(crate) fn dirichlet(&self, spectrum: &Spectrum) -> f64 {
        let norm = self.grid.volume().recip();
        norm * spectrum
            .coefficients()
            .iter()
            .zip(&self.symbol)
            .map(|(c, w)| w * c.norm_sqr())
            .sum::<f64>()
    }

    pub(crate) fn potential(&self, u: &Field) -> f64 {
        if self.spec.is_zero() {
            return 0.0;
        }
        self.grid.cell_volume()
            * u.values()
                .iter()
                .zip(&self.radii)
                .map(|(&v, &r)| self.spec.big_f(r, v))
                .sum::<f64>()
    }

    pub(crate) fn energy(&self, u: &Field, spectrum: &Spectrum) -> f64 {
        self.dirichlet(spectrum) - self.potential(u)
    }

    /// `2(-Δ)^s u - f(|x|, u)`.
    pub(crate) fn gradient(&self, u: &Field, spectrum: &Spectrum) -> Field {
        let coefficients: Vec<Complex64> = spectrum
            .coefficients()
            .iter()
            .zip(&self.symbol)
            .map(|(c, w)| c * (2.0 * w))
            .collect();
        let lap = inverse_transform(&Spectrum::from_parts_unchecked(self.grid, coefficients));
        let values = lap
            .values()
            .iter()
            .zip(u.values())
            .zip(&self.radii)
            .map(|((l, &v), &r)| l - self.spec.small_f(r, v))
            .collect();
        Field::from_parts_unchecked(self.grid, values)
    }

    /// `E(v) - E(u)` evaluated from the increments, so that it stays accurate
    /// when `v` is close to `u`.
    pub(crate) fn change(&self, u: &Field, u_hat: &Spectrum, v: &Field) -> (f64, Spectrum) {
        let delta: Vec<f64> = v
            .values()
            .iter()
            .zip(u.values())
            .map(|(a, b)| a - b)
            .collect();
        let d_hat = transform(&Field::from_parts_unchecked(self.grid, delta));
        let dd = self.grid.volume().recip()
            * d_hat
                .coefficients()
                .iter()
                .zip(u_hat.coefficients())
                .zip(&self.symbol)
                .map(|((d, c), w)| w * (d.conj() * (2.0 * c + d)).re)
                .sum::<f64>();
        let df = if self.spec.is_zero() {
            0.0
        } else {
            self.grid.cell_volume()
                * u.values()
                    .iter()
                    .zip(v.values())
                    .zip(&self.radii)
                    .map(|((&a, &b), &r)| self.spec.increment(r, a, b))
                    .sum::<f64>()
        };
        let v_hat: Vec<Complex64> = u_hat
            .coefficients()
            .iter()
            .zip(d_hat.coefficients())
            .map(|(a, b)| a + b)
            .collect();
        (dd - df, Spectrum::from_parts_unchecked(self.grid, v_hat))
    }
}

/// `E(u) = ‖(-Δ)^{s/2} u‖² - ∫ F(|x|, u) dx`, with `s` and `n` taken from `spec`.
pub fn energy(u: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    let model = EnergyModel::new(*u.grid(), spec)?;
    model.check(u)?;
    Ok(model.energy(u, &transform(u)))
}

/// L² gradient of [`energy`]: `2(-Δ)^s u - f(|x|, u)`.
pub fn energy_gradient(u: &Field, spec: &NonlinearitySpec) -> Result<Field> {
    let model = EnergyModel::new(*u.grid(), spec)?;
    model.check(u)?;
    Ok(model.gradient(u, &transform(u)))
}

/// `E(v) - E(u)` computed from increments.
pub fn energy_change(u: &Field, v: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    u.ensure_same_grid(v)?;
    let model = EnergyModel::new(*u.grid(), spec)?;
    model.check(u)?;
    Ok(model.change(u, &transform(u), v).0)
}

/// Rescales `u` onto `{‖u‖₂ = c}`.
pub fn project_sphere(u: &Field, c: f64) -> Result<Field> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", format!("mass must be > 0, got {c}")));
    }
    let norm = lp_norm(u, 2.0)?;
    if norm == 0.0 {
        return Err(Error::ZeroField("cannot project the zero field"));
    }
    Ok(u.scale(c / norm))
}
