use num_complex::Complex64;

use super::Grid;
use crate::{Error, Result};

/// Real samples of a function on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Field {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Samples `f` at every grid point; `f` receives the coordinates `(x, y, z)`
    /// with unused axes set to zero.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 3]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|j| f(grid.coordinates(j))).collect();
        Field::new(grid, values)
    }

    /// Samples a radial profile, using the lattice-exact radius.
    pub fn from_radial(grid: Grid, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|j| f(grid.radius(j))).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Field { grid, values }
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{} vs {}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_parts_unchecked(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> Field {
        self.map(f64::abs)
    }

    pub fn scale(&self, factor: f64) -> Field {
        self.map(|v| v * factor)
    }

    /// `self + factor·other`.
    pub fn axpy(&self, factor: f64, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + factor * b)
            .collect();
        Field::new(self.grid, values)
    }

    /// `Δx^n Σ u_j v_j`.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.ensure_same_grid(other)?;
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(sum * self.grid.cell_volume())
    }

    /// `Δx^n Σ u_j`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Cyclic translation by whole cells along each axis.
    pub fn shift(&self, cells: &[i64]) -> Field {
        let g = self.grid;
        let n = g.points() as i64;
        let mut out = vec![0.0; g.len()];
        for (j, &v) in self.values.iter().enumerate() {
            let idx = g.axis_indices(j);
            let mut target = [0usize; 3];
            for a in 0..g.dim() {
                let c = cells.get(a).copied().unwrap_or(0);
                target[a] = (idx[a] as i64 + c).rem_euclid(n) as usize;
            }
            out[g.flat_index(&target)] = v;
        }
        Field::from_parts_unchecked(g, out)
    }

    /// Mirror through the origin: `u(-x)`. The unpaired edge slice `-L/2` maps to itself.
    pub fn reflect(&self) -> Field {
        let g = self.grid;
        let n = g.points() as i64;
        let mut out = vec![0.0; g.len()];
        for (j, &v) in self.values.iter().enumerate() {
            let off = g.offsets(j);
            let mut mirrored = [0i64; 3];
            for a in 0..g.dim() {
                mirrored[a] = -off[a];
                if mirrored[a] >= n / 2 {
                    mirrored[a] -= n;
                }
            }
            out[g.index_of_offset(&mirrored).expect("mirror stays in box")] = v;
        }
        Field::from_parts_unchecked(g, out)
    }

    /// Compression by an integer factor about the origin: `u(δ·x)`.
    ///
    /// Grid point `m` takes the value at offset `δ·m`; points whose source lies
    /// outside the box are set to zero.
    pub fn compress(&self, factor: usize) -> Result<Field> {
        if factor == 0 {
            return Err(Error::param(
                "factor",
                "dilation factor must be a positive integer",
            ));
        }
        let g = self.grid;
        let f = factor as i64;
        let values = (0..g.len())
            .map(|j| {
                let off = g.offsets(j);
                let src = [off[0] * f, off[1] * f, off[2] * f];
                g.index_of_offset(&src).map_or(0.0, |k| self.values[k])
            })
            .collect();
        Ok(Field::from_parts_unchecked(g, values))
    }
}

/// Fourier coefficients of a field, stored in FFT slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Grid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: coefficients.len(),
            });
        }
        if let Some(index) = coefficients
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Spectrum { grid, coefficients })
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, coefficients: Vec<Complex64>) -> Self {
        Spectrum { grid, coefficients }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    /// Coefficient at the signed frequency vector `k` (each in `[-N/2, N/2)`).
    pub fn at(&self, k: &[i64]) -> Option<Complex64> {
        let n = self.grid.points() as i64;
        let mut slots = [0usize; 3];
        for (a, slot) in slots.iter_mut().enumerate().take(self.grid.dim()) {
            let kk = *k.get(a)?;
            if kk < -n / 2 || kk >= n / 2 {
                return None;
            }
            *slot = kk.rem_euclid(n) as usize;
        }
        Some(self.coefficients[self.grid.flat_index(&slots)])
    }

    /// Multiplies every coefficient by `m(|ξ|²)`.
    pub fn apply(&mut self, m: impl Fn(f64) -> f64) {
        let grid = self.grid;
        for (k, c) in self.coefficients.iter_mut().enumerate() {
            *c *= m(grid.xi_sq(k));
        }
    }

    /// `L^{-n} Σ w(|ξ|²) |û|²`, the weighted Parseval pairing.
    pub fn weighted_energy(&self, w: impl Fn(f64) -> f64) -> f64 {
        let grid = self.grid;
        let sum: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| w(grid.xi_sq(k)) * c.norm_sqr())
            .sum();
        sum / grid.volume()
    }
}
