use std::fmt::Write as _;
use std::path::Path;

use super::args::{parse_list, Args, Command};
use super::Outcome;
use crate::inequalities::{
    bessel_pairing_check, compactness_diagnostic, gn_certify, gn_indices_solve,
    multiplier_series_check, polya_szego_certify, sharp_sobolev_constant, sobolev_certify,
    CertificateReport,
};
use crate::minimizer::{
    mass_threshold_probe, minimize, parse_config, supercritical_probe, SolverConfig,
};
use crate::nonlinearity::{check_assumptions, NonlinearitySpec, SamplerConfig};
use crate::record::{fmt_real, Record};
use crate::spectral::io;
use crate::{Error, Result};

const CERT_TOL: f64 = 1e-10;

/// Text hashed into `config_hash`: every input flag plus the contents of the
/// config file. Output destinations and timing are excluded.
pub(crate) fn canonical_inputs(args: &Args) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}",
        args.command.name(),
        args.manifest,
        args.config,
        args.field,
        args.seed,
        args.grid,
        args.s,
        args.p,
        args.q,
        args.r,
        args.c,
        args.tol,
        args.m,
        args.constant,
        args.k,
        args.xi2,
        args.levels,
        args.deltas,
        args.c_list,
    );
    let _ = write!(s, "|{:?}", args.spec);
    if let Some(path) = &args.config {
        if let Ok(text) = std::fs::read_to_string(path) {
            s.push('|');
            s.push_str(&text);
        }
    }
    s
}

fn certificate(report: CertificateReport) -> (Outcome, Record) {
    let outcome = if report.satisfied {
        Outcome::Certified
    } else {
        Outcome::Violated
    };
    (outcome, report.to_record())
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_real(*v))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn dispatch(args: &Args) -> Result<(Outcome, Record)> {
    match args.command {
        Command::VerifyPs => verify_ps(args),
        Command::VerifyGn => verify_gn(args),
        Command::SobolevConst => sobolev_const(args),
        Command::SeriesCheck => series_check(args),
        Command::PairingCheck => pairing_check(args),
        Command::Compactness => compactness(args),
        Command::CheckF => check_f(args),
        Command::Minimize => run_minimize(args),
        Command::ProbeMass => probe_mass(args),
        Command::ProbeSuper => probe_super(args),
        Command::Batch => Err(Error::param("command", "batch cannot be nested")),
    }
}

fn verify_ps(args: &Args) -> Result<(Outcome, Record)> {
    let s = args.require_s()?;
    let u = args.field()?;
    Ok(certificate(polya_szego_certify(
        &u,
        s,
        args.tol(CERT_TOL)?,
    )?))
}

fn verify_gn(args: &Args) -> Result<(Outcome, Record)> {
    let s = args.require_s()?;
    let q = args.q.ok_or_else(|| Error::param("q", "--q is required"))?;
    let p = args.p.unwrap_or(2.0);
    let r = args.r.unwrap_or(2.0);
    let m = args.m.unwrap_or(q);
    // indices are checked before any field is touched
    let n = match args.grid()? {
        Some(g) => g.dim(),
        None => args.field()?.grid().dim(),
    };
    let idx = gn_indices_solve(n, s, p, r, m, q)?;
    let constant = match (args.constant, idx.p0) {
        (Some(c), _) => c,
        // Sobolev embedding into L^{p0} followed by Hölder interpolation
        (None, Some(_)) if p == 2.0 => sharp_sobolev_constant(n, s)?.powf(idx.theta),
        _ => {
            return Err(Error::param(
                "constant",
                "no default constant for these indices; pass --constant",
            ))
        }
    };
    let u = args.field()?;
    let (outcome, mut rec) = certificate(gn_certify(&u, &idx, constant, args.tol(CERT_TOL)?)?);
    rec.push_real("m", idx.m)
        .push("form", format!("{:?}", idx.form))
        .push_real("constant", constant);
    Ok((outcome, rec))
}

fn sobolev_const(args: &Args) -> Result<(Outcome, Record)> {
    let s = args.require_s()?;
    let grid = match args.grid()? {
        Some(g) => g,
        None => *args.field()?.grid(),
    };
    let n = grid.dim();
    let constant = sharp_sobolev_constant(n, s)?;
    let mut rec = Record::new();
    rec.push("n", n.to_string())
        .push_real("s", s)
        .push_real("constant", constant);
    if args.field.is_none() {
        return Ok((Outcome::Certified, rec));
    }
    let u = args.field()?;
    let p = args.p.unwrap_or(2.0);
    let (outcome, cert) = certificate(sobolev_certify(
        &u,
        s,
        p,
        args.constant,
        args.tol(CERT_TOL)?,
    )?);
    for (k, v) in cert.fields() {
        if k != "s" {
            rec.push(k, v.as_str());
        }
    }
    Ok((outcome, rec))
}

fn series_check(args: &Args) -> Result<(Outcome, Record)> {
    let s = args.require_s()?;
    let xi2 = args.xi2.unwrap_or(1.0);
    let terms = args.k.unwrap_or(20) as usize;
    let check = multiplier_series_check(xi2, s, terms)?;
    let partials: Vec<f64> = check.terms.iter().map(|t| t.partial).collect();
    let within = args.tol.is_none_or(|t| check.error() <= t);
    let ok = check.coefficients_positive && check.error_monotone && within;
    let mut rec = Record::new();
    rec.push_real("xi2", xi2)
        .push_real("s", s)
        .push("terms", terms.to_string())
        .push_real("partial", check.partial)
        .push_real("limit", check.limit)
        .push_real("error", check.error())
        .push(
            "coefficients_positive",
            check.coefficients_positive.to_string(),
        )
        .push("error_monotone", check.error_monotone.to_string())
        .push("partials", join(&partials));
    if let Some(path) = &args.csv {
        let rows: Vec<String> = check
            .terms
            .iter()
            .map(|t| {
                format!(
                    "{},{},{},{},{}",
                    t.k,
                    fmt_real(t.coefficient),
                    fmt_real(t.term),
                    fmt_real(t.partial),
                    fmt_real((t.partial - check.limit).abs())
                )
            })
            .collect();
        write_csv(path, "k,coefficient,term,partial,error", &rows)?;
    }
    Ok((
        if ok {
            Outcome::Certified
        } else {
            Outcome::Violated
        },
        rec,
    ))
}

fn pairing_check(args: &Args) -> Result<(Outcome, Record)> {
    let u = args.field()?;
    let k = args.k.unwrap_or(1);
    Ok(certificate(bessel_pairing_check(
        &u,
        k,
        args.tol(CERT_TOL)?,
    )?))
}

fn compactness(args: &Args) -> Result<(Outcome, Record)> {
    let grid = args.require_grid()?;
    let s = args.require_s()?;
    let levels = match &args.levels {
        Some(v) => parse_list(v, "levels")?,
        None => vec![2.0, 4.0, 8.0, 16.0],
    };
    let rep = compactness_diagnostic(grid, s, &levels)?;
    let mut rec = Record::new();
    rec.push_real("s", s)
        .push("levels", join(&rep.levels))
        .push("norms", join(&rep.norms))
        .push_real("reduction", rep.reduction())
        .push("strictly_decreasing", rep.strictly_decreasing.to_string())
        .push("grid", grid.to_string());
    if let Some(path) = &args.csv {
        let rows: Vec<String> = rep
            .levels
            .iter()
            .zip(&rep.norms)
            .zip(&rep.mollifier_integrals)
            .map(|((l, n), m)| format!("{},{},{}", fmt_real(*l), fmt_real(*n), fmt_real(*m)))
            .collect();
        write_csv(path, "level,norm,mollifier_integral", &rows)?;
    }
    let outcome = if rep.strictly_decreasing {
        Outcome::Certified
    } else {
        Outcome::Violated
    };
    Ok((outcome, rec))
}

/// Solver config and nonlinearity from `--config`, with flag overrides.
fn solver_setup(args: &Args) -> Result<(SolverConfig, NonlinearitySpec)> {
    let (mut cfg, mut spec) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_config(&text)?
        }
        None => {
            let grid = args.require_grid()?;
            let s = args.require_s()?;
            let cfg = SolverConfig::new(grid, args.c.unwrap_or(1.0), s)?;
            let spec = args
                .nonlinearity(s, grid.dim())?
                .ok_or_else(|| Error::param("spec", "--spec or --config is required"))?;
            (cfg, spec)
        }
    };
    if let Some(g) = args.grid()? {
        cfg.grid = g;
    }
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(c) = args.c {
        cfg.c = c;
    }
    if let Some(seed) = args.seed {
        cfg.seed = Some(seed);
    }
    if let Some(t) = args.tol {
        cfg.grad_tol = t;
    }
    if let Some(from_flag) = args.nonlinearity(cfg.s, cfg.grid.dim())? {
        spec = from_flag;
    }
    let spec = spec.with_context(cfg.s, cfg.grid.dim())?;
    cfg.validate()?;
    Ok((cfg, spec))
}

fn check_f(args: &Args) -> Result<(Outcome, Record)> {
    let spec = if args.config.is_some() {
        solver_setup(args)?.1
    } else {
        let n = args.grid()?.map_or(1, |g| g.dim());
        args.nonlinearity(args.s.unwrap_or(0.5), n)?
            .ok_or_else(|| Error::param("spec", "--spec or --config is required"))?
    };
    let sampler = SamplerConfig {
        seed: args.seed.unwrap_or(0),
        ..SamplerConfig::default()
    };
    let rep = check_assumptions(&spec, &sampler);
    let mut rec = spec.to_record();
    rec.push("criticality", spec.criticality().to_string());
    rec.extend(&rep.to_record());
    let outcome = if rep.all_hold() {
        Outcome::Certified
    } else {
        Outcome::Violated
    };
    Ok((outcome, rec))
}

fn run_minimize(args: &Args) -> Result<(Outcome, Record)> {
    let (cfg, spec) = solver_setup(args)?;
    let u0 = match &args.field {
        Some(_) => Some(args.field()?),
        None => None,
    };
    let rep = minimize(&cfg, &spec, u0.as_ref())?;
    if let Some(path) = &args.dump {
        io::write_text(&rep.u_final, path)?;
    }
    if let Some(path) = &args.csv {
        let rows: Vec<String> = rep
            .energy_trace
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{i},{}", fmt_real(*e)))
            .collect();
        write_csv(path, "step,energy", &rows)?;
    }
    let mut rec = rep.to_record();
    rec.push_real("c", cfg.c).push("grid", cfg.grid.to_string());
    rec.extend(&spec.to_record());
    let outcome = if rep.converged() {
        Outcome::Converged
    } else {
        Outcome::Flagged
    };
    Ok((outcome, rec))
}

fn default_ladder() -> Vec<f64> {
    (0..13).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect()
}

fn probe_mass(args: &Args) -> Result<(Outcome, Record)> {
    let (cfg, spec) = solver_setup(args)?;
    let ladder = match &args.c_list {
        Some(v) => parse_list(v, "c-list")?,
        None => default_ladder(),
    };
    let rep = mass_threshold_probe(&spec, &ladder, &cfg)?;
    if let Some(path) = &args.csv {
        let rows: Vec<String> = rep
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    fmt_real(r.c),
                    fmt_real(r.initial_gradient_norm),
                    fmt_real(r.final_gradient_norm),
                    fmt_real(r.ratio()),
                    fmt_real(r.final_energy),
                    r.iterations,
                    r.bounded
                )
            })
            .collect();
        write_csv(
            path,
            "c,initial_norm,final_norm,ratio,energy,iterations,bounded",
            &rows,
        )?;
    }
    let mut rec = rep.to_record();
    rec.extend(&spec.to_record());
    let outcome = if rep.monotone && rep.transition.is_some() {
        Outcome::Certified
    } else {
        Outcome::Flagged
    };
    Ok((outcome, rec))
}

fn probe_super(args: &Args) -> Result<(Outcome, Record)> {
    let u = args.field()?;
    let (s, spec) = if args.config.is_some() {
        let (cfg, spec) = solver_setup(args)?;
        (cfg.s, spec)
    } else {
        let s = args.require_s()?;
        let spec = args
            .nonlinearity(s, u.grid().dim())?
            .ok_or_else(|| Error::param("spec", "--spec or --config is required"))?;
        (s, spec)
    };
    let spec = spec.with_context(s, u.grid().dim())?;
    let deltas = match &args.deltas {
        Some(v) => parse_list(v, "deltas")?,
        None => vec![1.0, 2.0, 4.0, 8.0],
    };
    let rep = supercritical_probe(&spec, &u, &deltas)?;
    if let Some(path) = &args.csv {
        let rows: Vec<String> = rep
            .deltas
            .iter()
            .zip(&rep.energies)
            .zip(&rep.masses)
            .map(|((d, e), m)| format!("{d},{},{}", fmt_real(*e), fmt_real(*m)))
            .collect();
        write_csv(path, "delta,energy,mass", &rows)?;
    }
    let mut rec = rep.to_record();
    rec.extend(&spec.to_record());
    let outcome = if rep.strictly_decreasing && rep.last_negative {
        Outcome::Certified
    } else {
        Outcome::Flagged
    };
    Ok((outcome, rec))
}
