use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

/// Uniform periodic grid on the box `[-L/2, L/2)^n`.
///
/// Point `j` along an axis sits at `x_j = (j - N/2)·Δx`, so index `N/2` on
/// every axis is the origin. Flat indices are row-major (last axis fastest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    points: usize,
    length: f64,
}

impl Grid {
    pub fn new(dim: usize, points: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {points}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive, got {length}"
            )));
        }
        Ok(Grid {
            dim,
            points,
            length,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis (`N`).
    pub fn points(&self) -> usize {
        self.points
    }

    /// Box edge (`L`).
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Total number of grid points, `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// `Δx^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// `Δξ = 2π / L`.
    pub fn frequency_spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// `L^n`, the box measure.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Flat index of the origin.
    pub fn center_index(&self) -> usize {
        let c = self.points / 2;
        (0..self.dim).fold(0, |acc, _| acc * self.points + c)
    }

    /// Per-axis indices of a flat index (unused trailing axes are 0).
    pub fn axis_indices(&self, flat: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = rem % self.points;
            rem /= self.points;
        }
        out
    }

    pub fn flat_index(&self, axes: &[usize]) -> usize {
        axes[..self.dim]
            .iter()
            .fold(0, |acc, &a| acc * self.points + a)
    }

    /// Signed cell offsets from the origin.
    pub fn offsets(&self, flat: usize) -> [i64; 3] {
        let idx = self.axis_indices(flat);
        let c = (self.points / 2) as i64;
        let mut out = [0; 3];
        for axis in 0..self.dim {
            out[axis] = idx[axis] as i64 - c;
        }
        out
    }

    /// Flat index of a signed offset from the origin, if it lies in the box.
    pub fn index_of_offset(&self, offsets: &[i64]) -> Option<usize> {
        let c = (self.points / 2) as i64;
        let mut flat = 0usize;
        for &o in &offsets[..self.dim] {
            let a = o + c;
            if a < 0 || a >= self.points as i64 {
                return None;
            }
            flat = flat * self.points + a as usize;
        }
        Some(flat)
    }

    /// Squared distance to the origin in cell units (exact integer).
    pub fn radius_sq_cells(&self, flat: usize) -> i64 {
        self.offsets(flat).iter().map(|o| o * o).sum()
    }

    /// `|x_j|`. Computed from the integer cell distance, so points at equal
    /// lattice distance get bitwise equal radii.
    pub fn radius(&self, flat: usize) -> f64 {
        (self.radius_sq_cells(flat) as f64).sqrt() * self.spacing()
    }

    pub fn coordinates(&self, flat: usize) -> [f64; 3] {
        let dx = self.spacing();
        let off = self.offsets(flat);
        [off[0] as f64 * dx, off[1] as f64 * dx, off[2] as f64 * dx]
    }

    /// Signed frequency index of FFT slot `k`: `k` for `k < N/2`, `k - N` otherwise.
    /// Slot `N/2` is the Nyquist mode, mapped to `-N/2`.
    pub fn frequency_index(&self, k: usize) -> i64 {
        if k < self.points / 2 {
            k as i64
        } else {
            k as i64 - self.points as i64
        }
    }

    /// `|ξ_k|²` for a flat index in FFT ordering.
    pub fn xi_sq(&self, flat: usize) -> f64 {
        let idx = self.axis_indices(flat);
        let cells: i64 = idx[..self.dim]
            .iter()
            .map(|&k| {
                let f = self.frequency_index(k);
                f * f
            })
            .sum();
        let dxi = self.frequency_spacing();
        cells as f64 * dxi * dxi
    }

    /// Parity `(-1)^{Σ k}` of the FFT slot; shifts the DFT phase to the centered box.
    pub(crate) fn phase_sign(&self, flat: usize) -> f64 {
        let idx = self.axis_indices(flat);
        if idx[..self.dim].iter().sum::<usize>() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.dim, self.points, self.length)
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    /// Parses `n,N,L`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGrid(format!("expected `n,N,L`, got `{s}`")));
        }
        let dim = parts[0]
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad dimension `{}`", parts[0])))?;
        let points = parts[1]
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad point count `{}`", parts[1])))?;
        let length = parts[2]
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad box length `{}`", parts[2])))?;
        Grid::new(dim, points, length)
    }
}
