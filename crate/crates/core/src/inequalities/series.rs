use crate::special::binomial_series;
use crate::{Error, Result};

// partial sums start at 1, so a few ulps of 1 bound the rounding in the error
const ROUNDOFF: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerm {
    pub k: usize,
    /// `(-1)^{k+1} binom(s, k)`.
    pub coefficient: f64,
    /// `coefficient · (1 + ξ²)^{-k}`.
    pub term: f64,
    /// Partial sum `1 - Σ_{j<=k} term_j`.
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCheck {
    pub xi2: f64,
    pub s: f64,
    pub partial: f64,
    /// `(ξ²/(1+ξ²))^s`.
    pub limit: f64,
    pub terms: Vec<SeriesTerm>,
    pub coefficients_positive: bool,
    /// `|partial_K - limit|` is nonincreasing in `K`, up to rounding.
    pub error_monotone: bool,
}

impl SeriesCheck {
    pub fn error(&self) -> f64 {
        (self.partial - self.limit).abs()
    }
}

/// Binomial expansion `(1 - 1/(1+ξ²))^s = 1 - Σ (-1)^{k+1} binom(s,k) (1+ξ²)^{-k}`,
/// truncated after `terms` terms.
pub fn multiplier_series_check(xi2: f64, s: f64, terms: usize) -> Result<SeriesCheck> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::param("s", format!("must lie in (0, 1), got {s}")));
    }
    if !(xi2 >= 0.0 && xi2.is_finite()) {
        return Err(Error::param(
            "xi2",
            format!("must be a finite nonnegative number, got {xi2}"),
        ));
    }
    if terms == 0 {
        return Err(Error::param("K", "need at least one term"));
    }
    let x = 1.0 / (1.0 + xi2);
    let limit = (xi2 * x).powf(s);
    let binom = binomial_series(s, terms);
    let mut partial = 1.0;
    let mut power = 1.0;
    let mut out = Vec::with_capacity(terms);
    let mut prev_err = (partial - limit).abs();
    let mut error_monotone = true;
    for (k, &b) in binom.iter().enumerate().skip(1) {
        let coefficient = if k % 2 == 1 { b } else { -b };
        power *= x;
        let term = coefficient * power;
        partial -= term;
        let err = (partial - limit).abs();
        error_monotone &= err <= prev_err + ROUNDOFF;
        prev_err = err;
        out.push(SeriesTerm {
            k,
            coefficient,
            term,
            partial,
        });
    }
    Ok(SeriesCheck {
        xi2,
        s,
        partial,
        limit,
        coefficients_positive: out.iter().all(|t| t.coefficient > 0.0),
        error_monotone,
        terms: out,
    })
}
