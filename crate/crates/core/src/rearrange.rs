//! Schwarz symmetric decreasing rearrangement on the grid.
//!
//! The rearrangement of `u` is built by sorting `|u|` in descending order and
//! writing the values onto the grid points ordered by distance from the
//! origin. Equal distances are ordered lexicographically by axis index, so the
//! result is bit-reproducible. On equal-measure cells this is exactly the
//! layer-cake construction restricted to the lattice.

use crate::special::unit_ball_volume;
use crate::spectral::lp_norm;
use crate::{Error, Field, Grid, Result};

/// Grid points sorted by distance from the origin.
#[derive(Debug, Clone)]
pub struct BallOrdering {
    grid: Grid,
    permutation: Vec<usize>,
    omega: f64,
}

impl BallOrdering {
    pub fn new(grid: Grid) -> Self {
        let mut permutation: Vec<usize> = (0..grid.len()).collect();
        // flat index order is lexicographic in the axis indices
        permutation.sort_by_key(|&j| (grid.radius_sq_cells(j), j));
        BallOrdering {
            grid,
            permutation,
            omega: unit_ball_volume(grid.dim()),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Measure of the unit ball in `R^n`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rearrange(&self, u: &Field) -> Result<Field> {
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch(format!(
                "{} vs {}",
                u.grid(),
                self.grid
            )));
        }
        if let Some(index) = u.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let mut sorted: Vec<f64> = u.values().iter().map(|v| v.abs()).collect();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut out = vec![0.0; sorted.len()];
        for (&slot, v) in self.permutation.iter().zip(sorted) {
            out[slot] = v;
        }
        Ok(Field::from_parts_unchecked(self.grid, out))
    }

    /// True when the values are nonincreasing along the ordering.
    pub fn is_decreasing(&self, u: &Field) -> bool {
        self.permutation
            .windows(2)
            .all(|w| u.values()[w[0]] >= u.values()[w[1]])
    }
}

/// Schwarz symmetric decreasing rearrangement `u*` of `|u|`.
pub fn schwarz_rearrange(u: &Field) -> Result<Field> {
    BallOrdering::new(*u.grid()).rearrange(u)
}

/// `‖ |u| - u* ‖₂ / ‖u‖₂`, in `[0, 2]`; zero iff `|u|` is already rearranged.
pub fn asymmetry(u: &Field) -> Result<f64> {
    asymmetry_with(&BallOrdering::new(*u.grid()), u)
}

pub fn asymmetry_with(ordering: &BallOrdering, u: &Field) -> Result<f64> {
    let norm = lp_norm(u, 2.0)?;
    if norm == 0.0 {
        return Err(Error::ZeroField(
            "asymmetry is undefined for the zero field",
        ));
    }
    let star = ordering.rearrange(u)?;
    let diff = u.abs().axpy(-1.0, &star)?;
    Ok(lp_norm(&diff, 2.0)? / norm)
}

/// Outcome of [`radial_decay_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Largest `u(x)·ω_n^{1/2}|x|^{n/2} / c` over nonzero grid points.
    pub max_ratio: f64,
    /// `|x|` where the maximum is attained.
    pub argmax_radius: f64,
    /// Grid points where the bound `u(x) <= c / (ω_n^{1/2}|x|^{n/2})` fails.
    pub violations: usize,
    pub points_checked: usize,
    pub omega: f64,
    /// Exponent used on `ω_n` in the bound.
    pub omega_exponent: f64,
}

impl DecayReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks the pointwise decay bound `ω_n |x|^n u(x)² <= c²` for a Schwarz
/// symmetric `u` with `‖u‖₂ = c`.
///
/// The bound is evaluated as `u(x) <= c / (ω_n^{1/2} |x|^{n/2})`, which is
/// what the squared form gives after taking roots.
pub fn radial_decay_check(u: &Field, c: f64) -> Result<DecayReport> {
    if !(c > 0.0) {
        return Err(Error::param("c", "must be positive"));
    }
    let ordering = BallOrdering::new(*u.grid());
    let norm = lp_norm(u, 2.0)?;
    if norm == 0.0 {
        return Err(Error::ZeroField("decay check needs a nonzero field"));
    }
    if ((norm - c) / c).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "‖u‖₂ = {norm} differs from c = {c}"
        )));
    }
    let asym = asymmetry_with(&ordering, u)?;
    if asym > 1e-10 {
        return Err(Error::Precondition(format!(
            "field is not Schwarz symmetric (asymmetry {asym:e})"
        )));
    }
    let g = u.grid();
    let n = g.dim() as f64;
    let omega = ordering.omega();
    let mut report = DecayReport {
        max_ratio: 0.0,
        argmax_radius: 0.0,
        violations: 0,
        points_checked: 0,
        omega,
        omega_exponent: 0.5,
    };
    for (j, &v) in u.values().iter().enumerate() {
        let r = g.radius(j);
        if r == 0.0 {
            continue;
        }
        report.points_checked += 1;
        let ratio = v * omega.sqrt() * r.powf(n / 2.0) / c;
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.argmax_radius = r;
        }
        if ratio > 1.0 {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// `Δx^n Σ u_j v_j` for the fields as given and after rearranging both.
///
/// Returns `(plain, rearranged)`; for nonnegative inputs `plain <= rearranged`.
pub fn hardy_littlewood_pairing(u: &Field, v: &Field) -> Result<(f64, f64)> {
    u.ensure_same_grid(v)?;
    let ordering = BallOrdering::new(*u.grid());
    let plain = u.inner(v)?;
    let rearranged = ordering.rearrange(u)?.inner(&ordering.rearrange(v)?)?;
    Ok((plain, rearranged))
}
