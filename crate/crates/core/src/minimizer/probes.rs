use rayon::prelude::*;

use super::flow::{check_context, run_flow, FlowOptions};
use super::{EnergyModel, SolverConfig};
use crate::generators::gaussian;
use crate::nonlinearity::{Criticality, NonlinearitySpec};
use crate::record::{fmt_real, Record};
use crate::spectral::{lp_norm, transform};
use crate::{Error, Field, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MassProbeRow {
    pub c: f64,
    /// `‖∇_s u‖₂` of the projected start.
    pub initial_gradient_norm: f64,
    pub final_gradient_norm: f64,
    pub final_energy: f64,
    pub iterations: usize,
    pub bounded: bool,
}

impl MassProbeRow {
    pub fn ratio(&self) -> f64 {
        self.final_gradient_norm / self.initial_gradient_norm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassProbeReport {
    pub rows: Vec<MassProbeRow>,
    pub blowup_factor: f64,
    /// No bounded entry after the first unbounded one.
    pub monotone: bool,
    /// First `c` on the ladder flagged unbounded.
    pub transition: Option<f64>,
}

impl MassProbeReport {
    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        let flags: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                format!(
                    "{}:{}",
                    fmt_real(row.c),
                    if row.bounded { "bounded" } else { "unbounded" }
                )
            })
            .collect();
        r.push("flags", flags.join(";"))
            .push_real("blowup_factor", self.blowup_factor)
            .push_opt_real("transition_c", self.transition)
            .push("monotone", self.monotone.to_string());
        r
    }
}

/// Runs a bounded-iteration flow for each `c` on an increasing ladder and
/// flags whether `‖∇_s u‖₂` grew by at least `cfg.blowup_factor`.
///
/// Each run starts from the centered Gaussian of width `cfg.initial_width`.
pub fn mass_threshold_probe(
    spec: &NonlinearitySpec,
    c_list: &[f64],
    cfg: &SolverConfig,
) -> Result<MassProbeReport> {
    check_context(cfg, spec)?;
    if spec.criticality() != Criticality::Critical {
        return Err(Error::Precondition(format!(
            "mass probe needs critical growth l = 4s/n, got {} with l = {}",
            spec.criticality(),
            spec.l
        )));
    }
    if c_list.is_empty() {
        return Err(Error::param("c_list", "empty ladder"));
    }
    if c_list.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
        return Err(Error::param("c_list", "masses must be finite and > 0"));
    }
    if c_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("c_list", "ladder must be strictly increasing"));
    }
    let model = EnergyModel::new(cfg.grid, spec)?;
    let profile = gaussian(cfg.grid, cfg.initial_width, 1.0, [0.0; 3])?;
    let rows = c_list
        .par_iter()
        .map(|&c| -> Result<MassProbeRow> {
            let mut run_cfg = cfg.clone();
            run_cfg.c = c;
            let u0 = super::project_sphere(&profile, c)?;
            let initial = model.dirichlet(&transform(&u0)).sqrt();
            let opts = FlowOptions {
                max_iters: cfg.probe_iters,
                symmetrize: false,
                record_residuals: false,
            };
            let st = run_flow(&model, &run_cfg, None, u0, &opts)?;
            let final_norm = model.dirichlet(&st.hat).sqrt();
            Ok(MassProbeRow {
                c,
                initial_gradient_norm: initial,
                final_gradient_norm: final_norm,
                final_energy: model.energy(&st.u, &st.hat),
                iterations: st.iterations,
                bounded: final_norm < cfg.blowup_factor * initial,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let first_unbounded = rows.iter().position(|r| !r.bounded);
    let monotone = first_unbounded.is_none_or(|i| rows[i..].iter().all(|r| !r.bounded));
    Ok(MassProbeReport {
        transition: first_unbounded.map(|i| rows[i].c),
        monotone,
        blowup_factor: cfg.blowup_factor,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupercriticalReport {
    pub deltas: Vec<usize>,
    pub energies: Vec<f64>,
    /// `‖u_δ‖₂` for each `δ`.
    pub masses: Vec<f64>,
    pub strictly_decreasing: bool,
    pub last_negative: bool,
}

impl SupercriticalReport {
    pub fn to_record(&self) -> Record {
        let join = |v: &[f64]| v.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join(",");
        let deltas: Vec<String> = self.deltas.iter().map(|d| d.to_string()).collect();
        let mut r = Record::new();
        r.push("deltas", deltas.join(","))
            .push("energies", join(&self.energies))
            .push("masses", join(&self.masses))
            .push("strictly_decreasing", self.strictly_decreasing.to_string())
            .push("last_negative", self.last_negative.to_string());
        r
    }
}

/// Evaluates `E(δ^{n/2} u(δ·))` along integer dilations `δ`.
///
/// Energy falling without bound along this mass-preserving family is the
/// numerical signature of an infimum equal to `-∞`.
pub fn supercritical_probe(
    spec: &NonlinearitySpec,
    u: &Field,
    deltas: &[f64],
) -> Result<SupercriticalReport> {
    if spec.criticality() != Criticality::Supercritical {
        return Err(Error::Precondition(format!(
            "supercritical probe needs l > 4s/n, got {}",
            spec.criticality()
        )));
    }
    if deltas.is_empty() {
        return Err(Error::param("deltas", "empty list"));
    }
    let factors = deltas
        .iter()
        .map(|&d| {
            if d >= 1.0 && d.fract() == 0.0 && d <= u.grid().points() as f64 {
                Ok(d as usize)
            } else {
                Err(Error::param(
                    "deltas",
                    format!("dilation {d} is not a positive integer grid factor"),
                ))
            }
        })
        .collect::<Result<Vec<usize>>>()?;
    let model = EnergyModel::new(*u.grid(), spec)?;
    let n = u.grid().dim() as f64;
    let mut energies = Vec::with_capacity(factors.len());
    let mut masses = Vec::with_capacity(factors.len());
    for &d in &factors {
        let ud = u.compress(d)?.scale((d as f64).powf(n / 2.0));
        energies.push(model.energy(&ud, &transform(&ud)));
        masses.push(lp_norm(&ud, 2.0)?);
    }
    Ok(SupercriticalReport {
        strictly_decreasing: energies.windows(2).all(|w| w[1] < w[0]),
        last_negative: energies.last().is_some_and(|e| *e < 0.0),
        deltas: factors,
        energies,
        masses,
    })
}
