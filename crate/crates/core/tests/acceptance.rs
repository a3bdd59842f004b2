//! Acceptance criteria 1–12. Each prints one `criterion N: PASS|FAIL ...` line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use fraclab::generators::{gaussian, random_band_limited, random_default, white_noise};
use fraclab::inequalities::{
    compactness_diagnostic, gn_certify, gn_indices_solve, multiplier_series_check,
    polya_szego_certify, sharp_sobolev_constant, GnForm,
};
use fraclab::minimizer::{
    energy, energy_gradient, mass_threshold_probe, minimize, supercritical_probe, SolverConfig,
};
use fraclab::nonlinearity::{NonlinearitySpec, Profile};
use fraclab::rearrange::{hardy_littlewood_pairing, schwarz_rearrange};
use fraclab::{Error, Field, Grid};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

type Outcome = (bool, String);

fn power(l: f64, s: f64) -> NonlinearitySpec {
    NonlinearitySpec::power(Profile::Constant { value: 1.0 }, l, 1.0, s, 1).unwrap()
}

fn sorted_bits(values: impl Iterator<Item = f64>) -> Vec<u64> {
    let mut v: Vec<u64> = values.map(f64::to_bits).collect();
    v.sort_unstable();
    v
}

fn rearrangement_exactness() -> Outcome {
    let grids = [
        Grid::new(1, 256, 20.0).unwrap(),
        Grid::new(2, 32, 10.0).unwrap(),
    ];
    let bad = (0..1000u64)
        .into_par_iter()
        .filter(|&seed| {
            let u = white_noise(grids[(seed % 2) as usize], seed, -1.0, 1.0).unwrap();
            let star = schwarz_rearrange(&u).unwrap();
            let same = sorted_bits(u.values().iter().map(|v| v.abs()))
                == sorted_bits(star.values().iter().copied());
            let idempotent = schwarz_rearrange(&star).unwrap().values() == star.values();
            !(same && idempotent)
        })
        .count();
    (bad == 0, format!("{bad} of 1000 fields failed"))
}

fn hardy_littlewood() -> Outcome {
    let grids = [
        Grid::new(1, 256, 20.0).unwrap(),
        Grid::new(2, 32, 10.0).unwrap(),
    ];
    let worst = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let g = grids[(seed % 2) as usize];
            let u = white_noise(g, 2 * seed, 0.0, 1.0).unwrap();
            let v = white_noise(g, 2 * seed + 1, 0.0, 1.0).unwrap();
            let (plain, rearranged) = hardy_littlewood_pairing(&u, &v).unwrap();
            rearranged - plain
        })
        .reduce(|| f64::INFINITY, f64::min);
    (worst >= 0.0, format!("min <u*,v*> - <u,v> = {worst:e}"))
}

fn polya_szego() -> Outcome {
    let worst_negative = |points: usize, s: f64| {
        let g = Grid::new(1, points, 20.0).unwrap();
        (0..100u64)
            .into_par_iter()
            .map(|seed| {
                let u = random_band_limited(g, seed, 8, 2.5, 2.5).unwrap();
                polya_szego_certify(&u, s, 1e-3).unwrap().slack
            })
            .reduce(|| 0.0, f64::min)
            .min(0.0)
            .abs()
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let coarse = worst_negative(256, s);
        let fine = worst_negative(512, s);
        ok &= coarse <= 1e-3 && fine <= 0.5 * coarse;
        detail.push(format!("s={s}: {coarse:.2e}->{fine:.2e}"));
    }
    (
        ok,
        format!("worst negative slack N=256->512 {}", detail.join(", ")),
    )
}

fn series_identity() -> Outcome {
    let c = multiplier_series_check(1.0, 0.5, 20).unwrap();
    let p: Vec<f64> = c.terms.iter().take(3).map(|t| t.partial).collect();
    let expect = [0.75, 0.71875, 0.7109375];
    let ok = p == expect
        && (c.limit - 0.5f64.sqrt()).abs() < 1e-15
        && c.error_monotone
        && c.terms.windows(2).all(|w| w[1].partial < w[0].partial)
        && c.error() <= 1e-5;
    (
        ok,
        format!(
            "partials {p:?}, limit {:.5}, error(K=20) {:.2e}",
            c.limit,
            c.error()
        ),
    )
}

fn sobolev_constant() -> Outcome {
    let oracle = |n: usize, s: f64| {
        let nf = n as f64;
        (0.5 * s * PI.ln() + ln_gamma((nf - s) / 2.0) - ln_gamma((nf + s) / 2.0)
            + s / nf * (ln_gamma(nf) - ln_gamma(nf / 2.0)))
        .exp()
    };
    let c = sharp_sobolev_constant(2, 1.0).unwrap();
    let mut worst = (c - oracle(2, 1.0)).abs() / oracle(2, 1.0);
    let mut ok = (c - 3.544907701811032).abs() <= 1e-12;
    let mut points = 0;
    for n in 1..=3usize {
        for k in 1..=7 {
            let s = n as f64 * k as f64 / 8.0;
            if points == 20 {
                break;
            }
            points += 1;
            let rel = (sharp_sobolev_constant(n, s).unwrap() / oracle(n, s) - 1.0).abs();
            worst = worst.max(rel);
        }
    }
    ok &= worst <= 1e-12 && points == 20;
    (
        ok,
        format!("C(2,1) = {c}, worst relative gap over {points} points {worst:.1e}"),
    )
}

fn gn_algebra() -> Outcome {
    let idx = gn_indices_solve(2, 1.0, 2.0, 2.0, 4.0, 4.0).unwrap();
    let closed = 2.0 * (4.0 - 2.0) / (2.0 * 4.0 * 1.0);
    let named = |r: fraclab::Result<_>| match r {
        Err(Error::Inadmissible { constraint, .. }) => Some(constraint),
        _ => None,
    };
    let rejections = [
        (
            named(gn_indices_solve(1, 1.5, 2.0, 2.0, 4.0, 4.0)),
            "s out of range",
        ),
        (
            named(gn_indices_solve(1, 0.5, 3.0, 2.0, 4.0, 4.0)),
            "p out of range",
        ),
        (
            named(gn_indices_solve(1, 0.5, 1.1, 4.0, 2.0, 2.0)),
            "r/(q - m*theta) > 1",
        ),
        (
            named(gn_indices_solve(1, 0.5, 2.0, 2.0, 1.5, 1.5)),
            "m*theta > 0",
        ),
    ];
    let ok = idx.theta == 0.5
        && idx.theta == closed
        && idx.form == GnForm::L2
        && rejections.iter().all(|(got, want)| *got == Some(*want));
    (
        ok,
        format!(
            "theta = {}, closed form {closed}, {} named rejections",
            idx.theta,
            rejections.len()
        ),
    )
}

fn gn_dilation() -> Outcome {
    let idx = gn_indices_solve(1, 0.5, 2.0, 2.0, 4.0, 4.0).unwrap();
    let g = Grid::new(1, 4096, 320.0).unwrap();
    let bump = |d: f64| {
        Field::from_fn(g, |x| {
            let y = x[0] / d;
            (-y * y / 2.0).exp() * (1.0 + 0.3 * (1.3 * y).cos())
        })
        .unwrap()
    };
    let base = gn_certify(&bump(1.0), &idx, 1.0, 0.0).unwrap().ratio;
    let worst = [2.0, 3.0, 4.0]
        .iter()
        .map(|&d| (gn_certify(&bump(d), &idx, 1.0, 0.0).unwrap().ratio / base - 1.0).abs())
        .fold(0.0, f64::max);
    (
        worst <= 1e-3,
        format!("max relative ratio change over d=2,3,4: {worst:.2e}"),
    )
}

fn gradient_check() -> Outcome {
    let g = Grid::new(1, 256, 40.0).unwrap();
    let eps = 1e-5;
    let worst = (0..20u64)
        .map(|k| {
            let spec = if k % 2 == 0 {
                power(1.0, 0.75)
            } else {
                NonlinearitySpec::power(
                    Profile::Exponential {
                        amplitude: 1.5,
                        rate: 0.3,
                    },
                    1.5,
                    1.0,
                    0.6,
                    1,
                )
                .unwrap()
            };
            let u = random_default(g, k).unwrap().scale(1.5);
            let h = random_default(g, 500 + k).unwrap();
            let fd = (energy(&u.axpy(eps, &h).unwrap(), &spec).unwrap()
                - energy(&u.axpy(-eps, &h).unwrap(), &spec).unwrap())
                / (2.0 * eps);
            let exact = energy_gradient(&u, &spec).unwrap().inner(&h).unwrap();
            (fd - exact).abs() / exact.abs()
        })
        .fold(0.0, f64::max);
    (
        worst <= 1e-5,
        format!("worst relative FD gap over 20 pairs {worst:.2e}"),
    )
}

fn ground_state() -> Outcome {
    let g = Grid::new(1, 256, 40.0).unwrap();
    let spec = power(1.0, 0.75);
    let seeds: Vec<Option<u64>> = vec![None, Some(1), Some(2), Some(3), Some(4), Some(5)];
    let reports: Vec<_> = seeds
        .par_iter()
        .map(|&seed| {
            let mut cfg = SolverConfig::new(g, 1.0, 0.75).unwrap();
            cfg.grad_tol = 1e-6;
            cfg.seed = seed;
            minimize(&cfg, &spec, None).unwrap()
        })
        .collect();
    let mut ok = true;
    for r in &reports {
        ok &= r.converged()
            && r.max_constraint_error <= 1e-10
            && r.energy_trace.windows(2).all(|w| w[1] <= w[0])
            && r.el_residual <= 1e-6
            && r.asymmetry <= 1e-4;
    }
    let e0 = reports[0].energy;
    let spread = reports
        .iter()
        .map(|r| (r.energy / e0 - 1.0).abs())
        .fold(0.0, f64::max);
    ok &= spread <= 1e-6;
    let r = &reports[0];
    (
        ok,
        format!(
            "E = {:.12}, residual {:.1e}, asymmetry {:.1e}, constraint {:.1e}, seed spread {spread:.1e}",
            r.energy, r.el_residual, r.asymmetry, r.max_constraint_error
        ),
    )
}

fn supercritical() -> Outcome {
    let g = Grid::new(1, 4096, 80.0).unwrap();
    let u = gaussian(g, 1.0, 2.0, [0.0; 3]).unwrap();
    let rep = supercritical_probe(&power(3.0, 0.5), &u, &[1.0, 2.0, 4.0, 8.0]).unwrap();
    let mass = rep
        .masses
        .iter()
        .all(|m| (m / rep.masses[0] - 1.0).abs() < 1e-12);
    (
        rep.strictly_decreasing && rep.last_negative && mass,
        format!(
            "energies {:?}",
            rep.energies
                .iter()
                .map(|e| format!("{e:.3}"))
                .collect::<Vec<_>>()
        ),
    )
}

fn critical_mass() -> Outcome {
    let g = Grid::new(1, 512, 20.0).unwrap();
    let cfg = SolverConfig::new(g, 1.0, 0.5).unwrap();
    let ladder: Vec<f64> = (0..13).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect();
    let rep = mass_threshold_probe(&power(2.0, 0.5), &ladder, &cfg).unwrap();
    let flags: String = rep
        .rows
        .iter()
        .map(|r| if r.bounded { 'b' } else { 'u' })
        .collect();
    let ok =
        rep.monotone && rep.transition.is_some() && rep.rows[0].bounded && !rep.rows[12].bounded;
    (
        ok,
        format!("flags {flags}, transition at c = {:?}", rep.transition),
    )
}

fn compactness() -> Outcome {
    let g = Grid::new(1, 4096, 40.0).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [0.25, 0.5] {
        let rep = compactness_diagnostic(g, s, &[2.0, 4.0, 8.0, 16.0]).unwrap();
        ok &= rep.strictly_decreasing && rep.reduction() < 0.1;
        detail.push(format!(
            "s={s}: decreasing={} final/first={:.3}",
            rep.strictly_decreasing,
            rep.reduction()
        ));
    }
    (ok, detail.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, rearrangement_exactness),
        (2, hardy_littlewood),
        (3, polya_szego),
        (4, series_identity),
        (5, sobolev_constant),
        (6, gn_algebra),
        (7, gn_dilation),
        (8, gradient_check),
        (9, ground_state),
        (10, supercritical),
        (11, critical_mass),
        (12, compactness),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = check();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {n}: {verdict} ({:.2} s) {detail}",
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
