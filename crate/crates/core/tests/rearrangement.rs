use fraclab::generators::{
    bump, gaussian, indicator, random_band_limited, random_default, white_noise,
};
use fraclab::minimizer::project_sphere;
use fraclab::rearrange::{
    asymmetry, hardy_littlewood_pairing, radial_decay_check, schwarz_rearrange, BallOrdering,
};
use fraclab::spectral::lp_norm;
use fraclab::{Field, Grid};
use proptest::prelude::*;

fn sorted_abs(u: &Field) -> Vec<u64> {
    let mut v: Vec<f64> = u.values().iter().map(|x| x.abs()).collect();
    v.sort_by(f64::total_cmp);
    v.into_iter().map(f64::to_bits).collect()
}

fn grid_for(dim: usize) -> Grid {
    Grid::new(dim, [64, 16, 8][dim - 1], 10.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn equimeasurable_idempotent_homogeneous(seed in any::<u64>(), dim in 1usize..=3, lambda in 0.0f64..5.0) {
        let g = grid_for(dim);
        let u = white_noise(g, seed, -2.0, 2.0).unwrap();
        let star = schwarz_rearrange(&u).unwrap();
        prop_assert_eq!(sorted_abs(&u), sorted_abs(&star));
        prop_assert!(BallOrdering::new(g).is_decreasing(&star));
        prop_assert_eq!(&schwarz_rearrange(&star).unwrap(), &star);
        let scaled = schwarz_rearrange(&u.scale(lambda)).unwrap();
        prop_assert_eq!(scaled, star.scale(lambda));
    }

    #[test]
    fn norms_are_preserved(seed in any::<u64>(), dim in 1usize..=2) {
        let g = grid_for(dim);
        let u = random_default(g, seed).unwrap();
        let star = schwarz_rearrange(&u).unwrap();
        for q in [1.0, 2.0, 3.0] {
            let a = lp_norm(&u, q).unwrap();
            let b = lp_norm(&star, q).unwrap();
            prop_assert!((a - b).abs() <= 1e-13 * a);
        }
    }

    #[test]
    fn hardy_littlewood_without_tolerance(s1 in any::<u64>(), s2 in any::<u64>(), dim in 1usize..=2) {
        let g = grid_for(dim);
        let u = white_noise(g, s1, 0.0, 1.0).unwrap();
        let v = white_noise(g, s2, 0.0, 3.0).unwrap();
        let (plain, rearranged) = hardy_littlewood_pairing(&u, &v).unwrap();
        prop_assert!(plain <= rearranged);
    }

    #[test]
    fn asymmetry_depends_on_modulus(seed in any::<u64>()) {
        let g = grid_for(2);
        let u = random_default(g, seed).unwrap();
        let a = asymmetry(&u).unwrap();
        prop_assert!((0.0..=2.0).contains(&a));
        prop_assert_eq!(a, asymmetry(&u.scale(-1.0)).unwrap());
        prop_assert_eq!(asymmetry(&schwarz_rearrange(&u).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn subsampled_rearrangement_stays_symmetric(seed in any::<u64>(), d in 2usize..=4) {
        let g = Grid::new(1, 512, 40.0).unwrap();
        let star = schwarz_rearrange(&random_default(g, seed).unwrap()).unwrap();
        let sub = star.compress(d).unwrap();
        prop_assert_eq!(&schwarz_rearrange(&sub).unwrap(), &sub);
    }
}

#[test]
fn thousand_random_fields_are_bit_exact() {
    for seed in 0..1000u64 {
        let g = if seed % 2 == 0 {
            grid_for(1)
        } else {
            grid_for(2)
        };
        let u = random_default(g, seed).unwrap();
        let star = schwarz_rearrange(&u).unwrap();
        assert_eq!(sorted_abs(&u), sorted_abs(&star));
        assert_eq!(schwarz_rearrange(&star).unwrap(), star);
    }
}

#[test]
fn translated_bump_is_asymmetric() {
    let g = Grid::new(1, 128, 20.0).unwrap();
    let b = bump(g, 3.0, [0.0; 3]).unwrap();
    assert!(asymmetry(&b).unwrap() < 1e-15);
    let moved = b.shift(&[32]);
    assert!(asymmetry(&moved).unwrap() > 0.5);
    assert!(asymmetry(&Field::zeros(g)).is_err());
}

#[test]
fn decay_bound_for_gaussian() {
    for dim in 1..=3 {
        let g = grid_for(dim);
        let u = project_sphere(&gaussian(g, 1.0, 1.0, [0.0; 3]).unwrap(), 1.0).unwrap();
        let rep = radial_decay_check(&u, 1.0).unwrap();
        assert!(rep.holds(), "n = {dim}: max ratio {}", rep.max_ratio);
        assert_eq!(rep.omega_exponent, 0.5);
    }
}

#[test]
fn decay_bound_saturates_for_indicator() {
    let g = Grid::new(1, 1024, 20.0).unwrap();
    let u = project_sphere(&indicator(g, 3.0).unwrap(), 2.0).unwrap();
    let rep = radial_decay_check(&u, 2.0).unwrap();
    assert!((rep.max_ratio - 1.0).abs() < 0.01, "{}", rep.max_ratio);
    assert!((rep.argmax_radius - 3.0).abs() <= g.spacing());
}

#[test]
fn decay_check_preconditions() {
    let g = grid_for(1);
    let u = gaussian(g, 1.0, 1.0, [0.0; 3]).unwrap();
    assert!(radial_decay_check(&u, 1.0).is_err());
    let moved = project_sphere(&u.shift(&[5]), 1.0).unwrap();
    assert!(radial_decay_check(&moved, 1.0).is_err());
    assert!(radial_decay_check(&Field::zeros(g), 1.0).is_err());
}

fn worst_dilation_mismatch(points: usize, d: usize) -> f64 {
    let g = Grid::new(1, points, 40.0).unwrap();
    (0..100u64)
        .map(|seed| {
            let u = random_band_limited(g, seed, 4, 0.4, 2.0).unwrap();
            let sub_of_star = schwarz_rearrange(&u).unwrap().compress(d).unwrap();
            let star_of_sub = schwarz_rearrange(&u.compress(d).unwrap()).unwrap();
            let diff = lp_norm(&star_of_sub.axpy(-1.0, &sub_of_star).unwrap(), 2.0).unwrap();
            diff / lp_norm(&sub_of_star, 2.0).unwrap()
        })
        .fold(0.0, f64::max)
}

#[test]
fn dilation_mismatch_vanishes_under_refinement() {
    for d in 2..=4 {
        let coarse = worst_dilation_mismatch(512, d);
        let fine = worst_dilation_mismatch(2048, d);
        assert!(fine <= 0.03, "d = {d}: {fine}");
        assert!(fine <= 0.5 * coarse, "d = {d}: {coarse} -> {fine}");
    }
}
