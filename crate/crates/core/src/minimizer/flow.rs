use std::fmt;

use super::{EnergyModel, SolverConfig};
use crate::generators::{gaussian, random_default};
use crate::nonlinearity::{Criticality, NonlinearitySpec};
use crate::rearrange::{asymmetry_with, BallOrdering};
use crate::record::Record;
use crate::spectral::transform;
use crate::{Error, Field, Result, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIters,
    /// No step size decreased the energy.
    Stalled,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Converged => "converged",
            StopReason::MaxIters => "max_iters",
            StopReason::Stalled => "stalled",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MinimizerReport {
    pub u_final: Field,
    /// Directly evaluated `E(u_final)`.
    pub energy: f64,
    pub lambda: f64,
    /// `‖∇E(u) + 2λu‖₂ / ‖u‖₂`.
    pub el_residual: f64,
    pub asymmetry: f64,
    pub iterations: usize,
    /// `E(u₀)` followed by the accumulated accepted energy changes.
    pub energy_trace: Vec<f64>,
    pub residual_trace: Vec<f64>,
    pub stop: StopReason,
    /// Largest `|‖u‖₂ - c| / c` seen over all iterates.
    pub max_constraint_error: f64,
    pub symmetrizations: usize,
    pub criticality: Criticality,
    pub note: Option<&'static str>,
}

impl MinimizerReport {
    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push_real("energy", self.energy)
            .push_real("lambda", self.lambda)
            .push_real("residual", self.el_residual)
            .push_real("asymmetry", self.asymmetry)
            .push("iters", self.iterations.to_string())
            .push("stop", self.stop.to_string())
            .push("converged", self.converged().to_string())
            .push("stalled", (self.stop == StopReason::Stalled).to_string())
            .push_real("constraint_error", self.max_constraint_error)
            .push("symmetrizations", self.symmetrizations.to_string())
            .push("criticality", self.criticality.to_string())
            .push("note", self.note.unwrap_or("-"));
        r
    }
}

pub(crate) struct FlowOptions {
    pub max_iters: usize,
    pub symmetrize: bool,
    pub record_residuals: bool,
}

pub(crate) struct FlowState {
    pub u: Field,
    pub hat: Spectrum,
    pub lambda: f64,
    pub el_residual: f64,
    pub iterations: usize,
    pub energy_trace: Vec<f64>,
    pub residual_trace: Vec<f64>,
    pub stop: StopReason,
    pub max_constraint_error: f64,
    pub symmetrizations: usize,
}

fn l2_norm(u: &Field) -> f64 {
    (u.grid().cell_volume() * u.values().iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Projected gradient descent on `{‖u‖₂ = c}` with backtracking.
///
/// `u0` must already lie on the sphere.
pub(crate) fn run_flow(
    model: &EnergyModel,
    cfg: &SolverConfig,
    ordering: Option<&BallOrdering>,
    u0: Field,
    opts: &FlowOptions,
) -> Result<FlowState> {
    let grid = *model.grid();
    let c = cfg.c;
    let mut u = u0;
    let mut hat = transform(&u);
    let mut trace = vec![model.energy(&u, &hat)];
    let mut residuals = Vec::new();
    let mut tau = cfg.step;
    let mut max_err = (l2_norm(&u) - c).abs() / c;
    let mut symmetrizations = 0;
    let mut iterations = 0;
    let mut lambda;
    let mut el_residual;
    let stop;

    loop {
        if let (true, Some(ord)) = (opts.symmetrize, ordering) {
            if iterations % cfg.symmetrize_every == 0 {
                let w = ord.rearrange(&u)?;
                if w.values() != u.values() {
                    let (de, w_hat) = model.change(&u, &hat, &w);
                    if de <= 0.0 {
                        u = w;
                        hat = w_hat;
                        trace.push(trace.last().copied().unwrap_or(0.0) + de);
                        symmetrizations += 1;
                    }
                }
            }
        }

        let g = model.gradient(&u, &hat);
        let uu = u.inner(&u)?;
        lambda = -g.inner(&u)? / (2.0 * uu);
        let tangential = g.axpy(2.0 * lambda, &u)?;
        el_residual = l2_norm(&tangential) / uu.sqrt();
        if opts.record_residuals {
            residuals.push(el_residual);
        }
        if el_residual <= cfg.grad_tol {
            stop = StopReason::Converged;
            break;
        }
        if iterations >= opts.max_iters {
            stop = StopReason::MaxIters;
            break;
        }

        let mut accepted = false;
        for _ in 0..cfg.max_backtracks {
            let trial = u.axpy(-tau, &g)?;
            let norm = l2_norm(&trial);
            if norm > 0.0 && norm.is_finite() {
                let v = trial.scale(c / norm);
                let (de, _) = model.change(&u, &hat, &v);
                if de <= 0.0 {
                    max_err = max_err.max((l2_norm(&v) - c).abs() / c);
                    hat = transform(&v);
                    u = v;
                    trace.push(trace.last().copied().unwrap_or(0.0) + de);
                    tau *= cfg.growth;
                    accepted = true;
                    break;
                }
            }
            tau *= cfg.backtrack;
        }
        if !accepted {
            stop = StopReason::Stalled;
            break;
        }
        iterations += 1;
    }

    debug_assert_eq!(*u.grid(), grid);
    Ok(FlowState {
        u,
        hat,
        lambda,
        el_residual,
        iterations,
        energy_trace: trace,
        residual_trace: residuals,
        stop,
        max_constraint_error: max_err,
        symmetrizations,
    })
}

/// Starting field: `u0` if given, else a random band-limited field when the
/// config carries a seed, else the centered Gaussian; projected onto the sphere.
pub(crate) fn initial_field(cfg: &SolverConfig, u0: Option<&Field>) -> Result<Field> {
    let start = match (u0, cfg.seed) {
        (Some(u), _) => {
            if *u.grid() != cfg.grid {
                return Err(Error::GridMismatch(format!(
                    "initial field on {} but config grid is {}",
                    u.grid(),
                    cfg.grid
                )));
            }
            u.clone()
        }
        (None, Some(seed)) => random_default(cfg.grid, seed)?,
        (None, None) => gaussian(cfg.grid, cfg.initial_width, 1.0, [0.0; 3])?,
    };
    super::project_sphere(&start, cfg.c)
}

pub(crate) fn check_context(cfg: &SolverConfig, spec: &NonlinearitySpec) -> Result<()> {
    cfg.validate()?;
    if spec.n != cfg.grid.dim() {
        return Err(Error::GridMismatch(format!(
            "nonlinearity set up for n = {} but grid has n = {}",
            spec.n,
            cfg.grid.dim()
        )));
    }
    if spec.s != cfg.s {
        return Err(Error::param(
            "s",
            format!(
                "nonlinearity uses s = {} but solver uses s = {}",
                spec.s, cfg.s
            ),
        ));
    }
    Ok(())
}

/// Minimizes `E` on `{‖u‖₂ = c}`.
///
/// Requires a subcritical spec, or a critical one with `c` below
/// `cfg.mass_threshold`. Non-convergence is reported through
/// [`MinimizerReport::stop`], not as an error.
pub fn minimize(
    cfg: &SolverConfig,
    spec: &NonlinearitySpec,
    u0: Option<&Field>,
) -> Result<MinimizerReport> {
    check_context(cfg, spec)?;
    let criticality = spec.criticality();
    match criticality {
        Criticality::Subcritical => {}
        Criticality::Critical => match cfg.mass_threshold {
            Some(t) if cfg.c < t => {}
            Some(t) => {
                return Err(Error::Precondition(format!(
                    "critical growth needs c < mass_threshold = {t}, got c = {}",
                    cfg.c
                )))
            }
            None => {
                return Err(Error::Precondition(
                    "critical growth needs a configured mass_threshold".into(),
                ))
            }
        },
        Criticality::Supercritical => {
            return Err(Error::Precondition(format!(
                "supercritical growth l = {} > 4s/n: the infimum is -infinity",
                spec.l
            )))
        }
    }
    let model = EnergyModel::new(cfg.grid, spec)?;
    let start = initial_field(cfg, u0)?;
    let ordering = BallOrdering::new(cfg.grid);
    let opts = FlowOptions {
        max_iters: cfg.max_iters,
        symmetrize: cfg.symmetrize,
        record_residuals: true,
    };
    let st = run_flow(&model, cfg, Some(&ordering), start, &opts)?;
    let energy = model.energy(&st.u, &st.hat);
    let asym = asymmetry_with(&ordering, &st.u)?;
    Ok(MinimizerReport {
        energy,
        lambda: st.lambda,
        el_residual: st.el_residual,
        asymmetry: asym,
        iterations: st.iterations,
        energy_trace: st.energy_trace,
        residual_trace: st.residual_trace,
        stop: st.stop,
        max_constraint_error: st.max_constraint_error,
        symmetrizations: st.symmetrizations,
        criticality,
        note: spec
            .is_zero()
            .then_some("torus: with F = 0 the constant mode minimizes; no minimizer on R^n"),
        u_final: st.u,
    })
}
