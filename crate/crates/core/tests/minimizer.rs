use std::f64::consts::TAU;

use fraclab::generators::{gaussian, random_default};
use fraclab::minimizer::{
    energy, energy_change, energy_gradient, minimize, parse_config, project_sphere, SolverConfig,
    StopReason,
};
use fraclab::nonlinearity::{NonlinearitySpec, Profile};
use fraclab::rearrange::schwarz_rearrange;
use fraclab::spectral::{dirichlet_energy, lp_norm};
use fraclab::{Field, Grid};
use proptest::prelude::*;
use statrs::function::gamma::gamma;

fn cubic(s: f64) -> NonlinearitySpec {
    NonlinearitySpec::power(Profile::Constant { value: 1.0 }, 1.0, 1.0, s, 1).unwrap()
}

#[test]
fn gradient_matches_directional_differences() {
    let g = Grid::new(1, 128, 20.0).unwrap();
    let eps = 1e-5;
    let profiles = [
        Profile::Constant { value: 1.0 },
        Profile::Exponential {
            amplitude: 2.0,
            rate: 0.5,
        },
    ];
    for pair in 0..20u64 {
        let spec = NonlinearitySpec::power(profiles[pair as usize % 2], 1.0, 1.0, 0.75, 1).unwrap();
        let u = random_default(g, pair).unwrap().scale(2.0);
        let h = random_default(g, 1000 + pair).unwrap();
        let plus = energy(&u.axpy(eps, &h).unwrap(), &spec).unwrap();
        let minus = energy(&u.axpy(-eps, &h).unwrap(), &spec).unwrap();
        let fd = (plus - minus) / (2.0 * eps);
        let exact = energy_gradient(&u, &spec).unwrap().inner(&h).unwrap();
        assert!(
            (fd - exact).abs() <= 1e-5 * exact.abs(),
            "pair {pair}: {fd} vs {exact}"
        );
    }
}

#[test]
fn free_gradient_of_a_single_mode() {
    let g = Grid::new(1, 64, TAU).unwrap();
    let spec = NonlinearitySpec::zero(0.5, 1).unwrap();
    let u = Field::from_fn(g, |x| (2.0 * x[0]).cos()).unwrap();
    let grad = energy_gradient(&u, &spec).unwrap();
    for (gv, uv) in grad.values().iter().zip(u.values()) {
        assert!((gv - 4.0 * uv).abs() < 1e-12);
    }
    assert!((energy(&u, &spec).unwrap() - dirichlet_energy(&u, 0.5).unwrap()).abs() < 1e-14);
}

#[test]
fn zero_field_has_zero_energy_and_gradient() {
    let g = Grid::new(2, 16, 8.0).unwrap();
    let spec = NonlinearitySpec::power(Profile::Constant { value: 1.0 }, 1.0, 1.0, 0.5, 2).unwrap();
    let z = Field::zeros(g);
    assert_eq!(energy(&z, &spec).unwrap(), 0.0);
    assert!(energy_gradient(&z, &spec)
        .unwrap()
        .values()
        .iter()
        .all(|v| *v == 0.0));
}

// A·e^{-x²/(2w²)} has û(ξ) = A w √(2π) e^{-w²ξ²/2}, D_s = A² w^{1-2s} Γ(s+1/2)
// and ∫|u|³/3 = A³ w √(2π/3) / 3.
#[test]
fn gaussian_energy_against_quadrature_and_closed_form() {
    let (w, a, s): (f64, f64, f64) = (1.3, 0.8, 0.75);
    let spec = cubic(s);
    let quadrature = |length: f64, points: usize| {
        let dxi = TAU / length;
        let dirichlet: f64 = (1..points as i64)
            .map(|k| {
                let xi = k as f64 * dxi;
                let hat = a * w * TAU.sqrt() * (-0.5 * (w * xi).powi(2)).exp();
                2.0 * xi.powf(2.0 * s) * hat * hat
            })
            .sum::<f64>()
            / length;
        let dx = length / points as f64;
        let potential: f64 = (0..points)
            .map(|j| {
                let x = (j as f64 - points as f64 / 2.0) * dx;
                (a * (-x * x / (2.0 * w * w)).exp()).powi(3) / 3.0
            })
            .sum::<f64>()
            * dx;
        dirichlet - potential
    };
    let at = |length, points| {
        let g = Grid::new(1, points, length).unwrap();
        energy(&gaussian(g, w, a, [0.0; 3]).unwrap(), &spec).unwrap()
    };
    let e = at(40.0, 256);
    let q = quadrature(40.0, 1024);
    assert!((e - q).abs() <= 1e-6 * q.abs(), "{e} vs {q}");

    // the frequency Riemann sum converges like (2π/L)^{2s+1}
    let exact =
        a * a * w.powf(1.0 - 2.0 * s) * gamma(s + 0.5) - a.powi(3) * w * (TAU / 3.0).sqrt() / 3.0;
    let wide = at(1280.0, 16384);
    assert!(
        (wide - exact).abs() <= 1e-6 * exact.abs(),
        "{wide} vs {exact}"
    );
    assert!((e - exact).abs() > (wide - exact).abs());
}

#[test]
fn energy_change_matches_difference() {
    let g = Grid::new(1, 128, 20.0).unwrap();
    let spec = cubic(0.5);
    let u = random_default(g, 5).unwrap();
    let v = u.axpy(1e-3, &random_default(g, 6).unwrap()).unwrap();
    let direct = energy(&v, &spec).unwrap() - energy(&u, &spec).unwrap();
    let change = energy_change(&u, &v, &spec).unwrap();
    assert!((change - direct).abs() <= 1e-9 * direct.abs());
}

#[test]
fn projection_examples() {
    let g = Grid::new(1, 128, 20.0).unwrap();
    let u = random_default(g, 1).unwrap();
    let p = project_sphere(&u, 2.5).unwrap();
    assert!((lp_norm(&p, 2.0).unwrap() - 2.5).abs() <= 1e-13 * 2.5);
    let again = project_sphere(&p, 2.5).unwrap();
    for (a, b) in again.values().iter().zip(p.values()) {
        assert!((a - b).abs() <= 1e-15 * b.abs().max(1.0));
    }
    let ray = project_sphere(&u.scale(17.0), 2.5).unwrap();
    for (a, b) in ray.values().iter().zip(p.values()) {
        assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
    }
    assert!(project_sphere(&Field::zeros(g), 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn projection_hits_the_sphere(seed in any::<u64>(), c in 1e-3f64..1e3) {
        let g = Grid::new(1, 64, 10.0).unwrap();
        let p = project_sphere(&random_default(g, seed).unwrap(), c).unwrap();
        prop_assert!((lp_norm(&p, 2.0).unwrap() - c).abs() <= 1e-13 * c);
    }

    // nonincreasing weight: the potential gains and the Dirichlet part is contracted
    #[test]
    fn rearrangement_lowers_energy(seed in any::<u64>()) {
        let g = Grid::new(1, 256, 20.0).unwrap();
        let spec = NonlinearitySpec::power(Profile::Exponential { amplitude: 1.0, rate: 0.2 }, 1.0, 1.0, 0.5, 1).unwrap();
        let u = random_default(g, seed).unwrap();
        let star = schwarz_rearrange(&u).unwrap();
        let slack = 1e-3 * dirichlet_energy(&u, 0.5).unwrap();
        prop_assert!(energy(&star, &spec).unwrap() <= energy(&u, &spec).unwrap() + slack);
    }
}

#[test]
fn free_flow_reaches_the_constant_mode() {
    let g = Grid::new(1, 64, 10.0).unwrap();
    let mut cfg = SolverConfig::new(g, 1.0, 0.5).unwrap();
    cfg.grad_tol = 1e-8;
    cfg.seed = Some(3);
    let rep = minimize(&cfg, &NonlinearitySpec::zero(0.5, 1).unwrap(), None).unwrap();
    assert_eq!(rep.stop, StopReason::Converged);
    assert!(rep.note.is_some());
    assert!(rep.energy.abs() < 1e-12);
    let level = 1.0 / 10f64.sqrt();
    assert!(rep
        .u_final
        .values()
        .iter()
        .all(|v| (v.abs() - level).abs() < 1e-6));
}

#[test]
fn small_ground_state_run() {
    let g = Grid::new(1, 128, 30.0).unwrap();
    let mut cfg = SolverConfig::new(g, 1.0, 0.75).unwrap();
    cfg.grad_tol = 1e-4;
    let rep = minimize(&cfg, &cubic(0.75), None).unwrap();
    assert!(
        rep.converged(),
        "{:?} residual {}",
        rep.stop,
        rep.el_residual
    );
    assert!(rep.max_constraint_error <= 1e-10);
    assert!(rep.energy_trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(rep.asymmetry <= 1e-4);
    assert!(rep.energy < 0.0 && rep.lambda > 0.0);
    assert!(rep.symmetrizations >= 1);
}

#[test]
fn rejects_supercritical_and_unbounded_critical() {
    let g = Grid::new(1, 64, 10.0).unwrap();
    let cfg = SolverConfig::new(g, 1.0, 0.5).unwrap();
    let sup = NonlinearitySpec::power(Profile::Constant { value: 1.0 }, 3.0, 1.0, 0.5, 1).unwrap();
    assert!(minimize(&cfg, &sup, None).is_err());
    let crit = NonlinearitySpec::power(Profile::Constant { value: 1.0 }, 2.0, 1.0, 0.5, 1).unwrap();
    assert!(minimize(&cfg, &crit, None).is_err());
    let mut bounded = cfg.clone();
    bounded.mass_threshold = Some(2.0);
    bounded.max_iters = 50;
    assert!(minimize(&bounded, &crit, None).is_ok());
}

#[test]
fn config_file_round_trip() {
    let text = "\
[grid]
n = 1
N = 128
L = 30   # box length

[solver]
c = 1
s = 0.75
grad_tol = 1e-5
seed = 4

[nonlinearity]
family = power
l = 1
K = 1
a = const
params = 1
";
    let (cfg, spec) = parse_config(text).unwrap();
    assert_eq!(cfg.grid, Grid::new(1, 128, 30.0).unwrap());
    assert_eq!(
        (cfg.c, cfg.s, cfg.grad_tol, cfg.seed),
        (1.0, 0.75, 1e-5, Some(4))
    );
    assert_eq!(spec, cubic(0.75));
    let err = parse_config("[grid]\nn = 1\nN = x\nL = 2\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}
