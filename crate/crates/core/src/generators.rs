//! Built-in test fields.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Field, Grid, Result};

/// `amplitude·exp(-|x - center|² / (2 width²))`.
pub fn gaussian(grid: Grid, width: f64, amplitude: f64, center: [f64; 3]) -> Result<Field> {
    if !(width > 0.0) {
        return Err(Error::param("width", "must be positive"));
    }
    if center == [0.0; 3] {
        // lattice-exact radius keeps the centered profile exactly Schwarz symmetric
        return Field::from_radial(grid, |r| {
            amplitude * (-(r * r) / (2.0 * width * width)).exp()
        });
    }
    Field::from_fn(grid, |x| {
        let d2: f64 = (0..3).map(|a| (x[a] - center[a]).powi(2)).sum();
        amplitude * (-d2 / (2.0 * width * width)).exp()
    })
}

/// Smooth compactly supported bump `exp(1 - 1/(1 - |x-c|²/R²))` on `|x - c| < R`, peak 1.
pub fn bump(grid: Grid, radius: f64, center: [f64; 3]) -> Result<Field> {
    if !(radius > 0.0) {
        return Err(Error::param("radius", "must be positive"));
    }
    let profile = move |r: f64| {
        let t = r / radius;
        if t < 1.0 {
            (1.0 - 1.0 / (1.0 - t * t)).exp()
        } else {
            0.0
        }
    };
    if center == [0.0; 3] {
        return Field::from_radial(grid, profile);
    }
    Field::from_fn(grid, |x| {
        let d2: f64 = (0..3).map(|a| (x[a] - center[a]).powi(2)).sum();
        profile(d2.sqrt())
    })
}

/// Two separated Gaussians of different heights along the first axis.
pub fn two_bump(grid: Grid) -> Result<Field> {
    let l = grid.length();
    let a = gaussian(grid, l / 20.0, 1.0, [-l / 6.0, 0.0, 0.0])?;
    let b = gaussian(grid, l / 16.0, 0.6, [l / 5.0, 0.0, 0.0])?;
    a.axpy(1.0, &b)
}

/// Indicator of the grid points with `|x| <= radius`.
pub fn indicator(grid: Grid, radius: f64) -> Result<Field> {
    Field::from_radial(grid, |r| if r <= radius { 1.0 } else { 0.0 })
}

/// Indicator of an explicit set of flat indices.
pub fn indicator_of(grid: Grid, indices: &[usize]) -> Result<Field> {
    let mut values = vec![0.0; grid.len()];
    for &i in indices {
        if i >= grid.len() {
            return Err(Error::param("indices", format!("index {i} outside grid")));
        }
        values[i] = 1.0;
    }
    Field::new(grid, values)
}

/// Seeded random smooth field: a sum of plane waves with wavenumbers
/// `|ω| <= max_wavenumber`, Gaussian coefficients and a centered Gaussian
/// envelope of width `envelope`. Its spectrum is negligible beyond
/// `max_wavenumber + few/envelope`, so it is band-limited to machine precision
/// whenever that lies well below the grid Nyquist frequency.
pub fn random_band_limited(
    grid: Grid,
    seed: u64,
    modes: usize,
    max_wavenumber: f64,
    envelope: f64,
) -> Result<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let waves: Vec<([f64; 3], f64, f64)> = (0..modes)
        .map(|_| {
            let mut w = [0.0; 3];
            loop {
                for wa in w.iter_mut().take(dim) {
                    *wa = rng.random_range(-1.0..1.0);
                }
                if w.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                    break;
                }
            }
            for wa in w.iter_mut() {
                *wa *= max_wavenumber;
            }
            let amp: f64 = rng.sample(StandardNormal);
            let phase = rng.random_range(0.0..2.0 * PI);
            (w, amp, phase)
        })
        .collect();
    Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let env = (-r2 / (2.0 * envelope * envelope)).exp();
        let s: f64 = waves
            .iter()
            .map(|(w, amp, phase)| amp * (w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + phase).cos())
            .sum();
        env * s
    })
}

/// Default random band-limited field used by sweeps: 8 modes, `|ω| <= 2.5`,
/// envelope width `L/8`.
pub fn random_default(grid: Grid, seed: u64) -> Result<Field> {
    random_band_limited(grid, seed, 8, 2.5, grid.length() / 8.0)
}

/// Seeded i.i.d. uniform values in `[lo, hi)` (not smooth).
pub fn white_noise(grid: Grid, seed: u64, lo: f64, hi: f64) -> Result<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len()).map(|_| rng.random_range(lo..hi)).collect();
    Field::new(grid, values)
}

/// Named generator as accepted by the command line (`gen:<name>[:<arg>]`;
/// the Gaussian also takes `gen:gaussian:<width>:<amplitude>`).
#[derive(Debug, Clone, PartialEq)]
pub enum FieldGenerator {
    Gaussian { width: f64, amplitude: f64 },
    Bump { radius: f64 },
    TwoBump,
    Indicator { radius: f64 },
    Random { seed: Option<u64> },
}

impl FieldGenerator {
    /// `seed` is used by the random generator when the spec did not fix one.
    pub fn generate(&self, grid: Grid, seed: u64) -> Result<Field> {
        match *self {
            FieldGenerator::Gaussian { width, amplitude } => {
                gaussian(grid, width, amplitude, [0.0; 3])
            }
            FieldGenerator::Bump { radius } => bump(grid, radius, [0.0; 3]),
            FieldGenerator::TwoBump => two_bump(grid),
            FieldGenerator::Indicator { radius } => indicator(grid, radius),
            FieldGenerator::Random { seed: s } => random_default(grid, s.unwrap_or(seed)),
        }
    }
}

impl FromStr for FieldGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix("gen:").unwrap_or(s);
        let (name, arg) = match body.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (body, None),
        };
        let num = |default: f64| -> Result<f64> {
            arg.map_or(Ok(default), |a| {
                a.parse()
                    .map_err(|_| Error::param("field", format!("bad generator argument `{a}`")))
            })
        };
        match name {
            "gaussian" => {
                // gaussian[:width[:amplitude]]
                let (w, a) = match arg.and_then(|a| a.split_once(':')) {
                    Some((w, a)) => (Some(w), Some(a)),
                    None => (arg, None),
                };
                let parse = |v: Option<&str>, default: f64| -> Result<f64> {
                    v.map_or(Ok(default), |v| {
                        v.parse().map_err(|_| {
                            Error::param("field", format!("bad generator argument `{v}`"))
                        })
                    })
                };
                Ok(FieldGenerator::Gaussian {
                    width: parse(w, 1.0)?,
                    amplitude: parse(a, 1.0)?,
                })
            }
            "bump" => Ok(FieldGenerator::Bump { radius: num(2.0)? }),
            "two-bump" => Ok(FieldGenerator::TwoBump),
            "indicator" => Ok(FieldGenerator::Indicator { radius: num(1.0)? }),
            "random" => Ok(FieldGenerator::Random {
                seed: arg
                    .map(|a| {
                        a.parse()
                            .map_err(|_| Error::param("field", format!("bad seed `{a}`")))
                    })
                    .transpose()?,
            }),
            _ => Err(Error::param("field", format!("unknown generator `{name}`"))),
        }
    }
}
