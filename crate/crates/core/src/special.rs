//! Gamma-function helpers.

use std::f64::consts::PI;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of `|Γ(x)|`.
///
/// Uses the reflection formula below `x = 1/2`. Poles (non-positive
/// integers) return `+inf`.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x.fract() == 0.0 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Positive integer or half-integer arguments small enough for an exact product.
fn product_form(x: f64) -> Option<(f64, u32)> {
    if !(x > 0.0 && x <= 170.0) {
        return None;
    }
    if x.fract() == 0.0 {
        Some((1.0, x as u32 - 1))
    } else if x.fract() == 0.5 {
        Some((0.5, (x - 0.5) as u32))
    } else {
        None
    }
}

/// `Γ(x)` for `x > 0`. Integer and half-integer arguments use the exact
/// recurrence from `Γ(1) = 1` and `Γ(1/2) = √π`.
pub fn gamma(x: f64) -> f64 {
    match product_form(x) {
        Some((base, k)) => {
            let start = if base == 1.0 { 1.0 } else { PI.sqrt() };
            (0..k).fold(start, |acc, j| acc * (base + j as f64))
        }
        None => ln_gamma(x).exp(),
    }
}

/// `Γ(a)/Γ(b)` for `a, b > 0`, exact through the recurrence when `a - b` is an integer.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    if product_form(a).is_some() && product_form(b).is_some() {
        return gamma(a) / gamma(b);
    }
    let d = a - b;
    if d.fract() == 0.0 && d.abs() <= 64.0 {
        let (lo, k) = if d >= 0.0 {
            (b, d as u32)
        } else {
            (a, (-d) as u32)
        };
        let prod = (0..k).fold(1.0, |acc, j| acc * (lo + j as f64));
        return if d >= 0.0 { prod } else { 1.0 / prod };
    }
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// Volume of the unit ball in `R^n`: `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    (half * PI.ln() - ln_gamma(half + 1.0)).exp()
}

/// Generalized binomial coefficients `binom(s, k)` for `k = 0..=kmax`.
pub fn binomial_series(s: f64, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut b = 1.0;
    out.push(b);
    for k in 1..=kmax {
        b *= (s - (k as f64 - 1.0)) / k as f64;
        out.push(b);
    }
    out
}
