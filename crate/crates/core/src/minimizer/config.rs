use std::collections::BTreeMap;

use crate::nonlinearity::NonlinearitySpec;
use crate::{Error, Grid, Result};

/// Parameters of the normalized gradient flow.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: Grid,
    /// Constraint level `‖u‖₂ = c`.
    pub c: f64,
    /// Fractional order in `(0, 1)`.
    pub s: f64,
    /// Initial step size.
    pub step: f64,
    /// Step reduction factor on a rejected step.
    pub backtrack: f64,
    /// Step growth factor after an accepted step.
    pub growth: f64,
    pub max_backtracks: usize,
    pub max_iters: usize,
    /// Tolerance on the tangential gradient norm.
    pub grad_tol: f64,
    /// Random band-limited start instead of the centered Gaussian.
    pub seed: Option<u64>,
    /// Try a rearrangement step at the start and every `symmetrize_every` iterations.
    pub symmetrize: bool,
    pub symmetrize_every: usize,
    /// Admissible mass bound in the critical case.
    pub mass_threshold: Option<f64>,
    /// Width of the default Gaussian start.
    pub initial_width: f64,
    /// Ratio of final to initial `‖∇_s u‖₂` flagged as blow-up by the mass probe.
    pub blowup_factor: f64,
    /// Iteration budget of each mass-probe run.
    pub probe_iters: usize,
}

impl SolverConfig {
    pub fn new(grid: Grid, c: f64, s: f64) -> Result<Self> {
        let cfg = SolverConfig {
            grid,
            c,
            s,
            step: 1e-2,
            backtrack: 0.5,
            growth: 1.1,
            max_backtracks: 60,
            max_iters: 20_000,
            grad_tol: 1e-7,
            seed: None,
            symmetrize: true,
            symmetrize_every: 25,
            mass_threshold: None,
            initial_width: 1.0,
            blowup_factor: 2.0,
            probe_iters: 500,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        };
        pos("c", self.c)?;
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::param(
                "s",
                format!("must lie in (0, 1), got {}", self.s),
            ));
        }
        pos("step", self.step)?;
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::param(
                "backtrack",
                format!("must lie in (0, 1), got {}", self.backtrack),
            ));
        }
        if !(self.growth >= 1.0 && self.growth.is_finite()) {
            return Err(Error::param(
                "growth",
                format!("must be >= 1, got {}", self.growth),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be >= 1"));
        }
        if self.max_backtracks == 0 {
            return Err(Error::param("max_backtracks", "must be >= 1"));
        }
        pos("grad_tol", self.grad_tol)?;
        if self.symmetrize_every == 0 {
            return Err(Error::param("symmetrize_every", "must be >= 1"));
        }
        if let Some(t) = self.mass_threshold {
            pos("mass_threshold", t)?;
        }
        pos("initial_width", self.initial_width)?;
        if !(self.blowup_factor > 1.0 && self.blowup_factor.is_finite()) {
            return Err(Error::param("blowup_factor", "must be > 1"));
        }
        if self.probe_iters == 0 {
            return Err(Error::param("probe_iters", "must be >= 1"));
        }
        Ok(())
    }

    /// Applies one `[solver]` key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::param(key, format!("cannot parse `{v}`")))
        }
        match key {
            "c" => self.c = num("c", value)?,
            "s" => self.s = num("s", value)?,
            "step" => self.step = num("step", value)?,
            "backtrack" => self.backtrack = num("backtrack", value)?,
            "growth" => self.growth = num("growth", value)?,
            "max_backtracks" => self.max_backtracks = num("max_backtracks", value)?,
            "max_iters" => self.max_iters = num("max_iters", value)?,
            "grad_tol" => self.grad_tol = num("grad_tol", value)?,
            "seed" => {
                self.seed = match value.trim() {
                    "" | "none" => None,
                    v => Some(num("seed", v)?),
                }
            }
            "symmetrize" => self.symmetrize = num("symmetrize", value)?,
            "symmetrize_every" => self.symmetrize_every = num("symmetrize_every", value)?,
            "mass_threshold" => self.mass_threshold = Some(num("mass_threshold", value)?),
            "initial_width" => self.initial_width = num("initial_width", value)?,
            "blowup_factor" => self.blowup_factor = num("blowup_factor", value)?,
            "probe_iters" => self.probe_iters = num("probe_iters", value)?,
            _ => return Err(Error::param("solver", format!("unknown key `{key}`"))),
        }
        Ok(())
    }
}

/// Parses a config file with `[grid]`, `[solver]` and `[nonlinearity]`
/// sections of `key = value` lines. `#` and `;` start comments.
///
/// A missing `[nonlinearity]` section means `F ≡ 0`.
pub fn parse_config(text: &str) -> Result<(SolverConfig, NonlinearitySpec)> {
    let mut sections: BTreeMap<String, Vec<(usize, String, String)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "grid" | "solver" | "nonlinearity") {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown section [{name}]"),
                });
            }
            if sections.contains_key(&name) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate section [{name}]"),
                });
            }
            sections.insert(name.clone(), Vec::new());
            current = Some(name);
            continue;
        }
        let Some(section) = &current else {
            return Err(Error::Parse {
                line: line_no,
                message: "key outside of a section".into(),
            });
        };
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected key = value, got `{line}`"),
            });
        };
        sections
            .get_mut(section)
            .expect("section registered")
            .push((line_no, k.trim().to_string(), v.trim().to_string()));
    }

    let at = |line: usize| {
        move |e: Error| Error::Parse {
            line,
            message: e.to_string(),
        }
    };

    let grid_entries = sections.get("grid").ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing [grid] section".into(),
    })?;
    let (mut n, mut points, mut length) = (None, None, None);
    for (line, k, v) in grid_entries {
        let bad = || Error::Parse {
            line: *line,
            message: format!("bad value `{v}` for {k}"),
        };
        match k.as_str() {
            "n" => n = Some(v.parse::<usize>().map_err(|_| bad())?),
            "N" => points = Some(v.parse::<usize>().map_err(|_| bad())?),
            "L" => length = Some(v.parse::<f64>().map_err(|_| bad())?),
            _ => {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("unknown [grid] key `{k}`"),
                })
            }
        }
    }
    let missing = |key: &str| Error::Parse {
        line: 0,
        message: format!("[grid] is missing `{key}`"),
    };
    let grid = Grid::new(
        n.ok_or_else(|| missing("n"))?,
        points.ok_or_else(|| missing("N"))?,
        length.ok_or_else(|| missing("L"))?,
    )?;

    let solver = sections.get("solver").map(Vec::as_slice).unwrap_or(&[]);
    let mut cfg = SolverConfig::new(grid, 1.0, 0.5)?;
    for (line, k, v) in solver {
        cfg.set(k, v).map_err(at(*line))?;
    }
    cfg.validate()?;

    let spec = match sections.get("nonlinearity") {
        None => NonlinearitySpec::zero(cfg.s, grid.dim())?,
        Some(entries) => {
            for (line, k, _) in entries {
                if !matches!(k.as_str(), "family" | "l" | "K" | "a" | "params") {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("unknown [nonlinearity] key `{k}`"),
                    });
                }
            }
            let lookup = |key: &str| {
                entries
                    .iter()
                    .find(|(_, k, _)| k == key)
                    .map(|(_, _, v)| v.as_str())
            };
            NonlinearitySpec::from_entries(lookup, cfg.s, grid.dim())?
        }
    };
    Ok((cfg, spec))
}
