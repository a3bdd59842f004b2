use std::f64::consts::PI;

use super::{CertificateKind, CertificateMeta, CertificateReport};
use crate::special::gamma_ratio;
use crate::spectral::{dirichlet_energy, fractional_laplacian, lp_norm};
use crate::{Error, Field, Result};

/// `π^{s/2} Γ((n-s)/2)/Γ((n+s)/2) · (Γ(n)/Γ(n/2))^{s/n}`.
pub fn sharp_sobolev_constant(n: usize, s: f64) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || !(s > 0.0 && s < nf) {
        return Err(Error::param("s", format!("need 0 < s < n = {n}, got {s}")));
    }
    Ok(PI.powf(s / 2.0)
        * gamma_ratio((nf - s) / 2.0, (nf + s) / 2.0)
        * gamma_ratio(nf, nf / 2.0).powf(s / nf))
}

/// Critical Sobolev exponent `q = pn/(n - sp)` for `1 < p < n/s`.
pub fn sobolev_exponent(n: usize, s: f64, p: f64) -> Result<f64> {
    let nf = n as f64;
    if !(s > 0.0 && s < nf) {
        return Err(Error::Inadmissible {
            constraint: "s out of range",
            detail: format!("need 0 < s < n = {n}, got s = {s}"),
        });
    }
    if !(p > 1.0 && p < nf / s) {
        return Err(Error::Inadmissible {
            constraint: "p out of range",
            detail: format!("need 1 < p < n/s = {}, got p = {p}", nf / s),
        });
    }
    Ok(p * nf / (nf - s * p))
}

/// Evaluates `‖u‖_q <= C₀ ‖(-Δ)^{s/2} u‖_p` at the critical exponent.
///
/// For `p = 2` the constant is [`sharp_sobolev_constant`]; other `p` need an
/// explicit `constant`.
pub fn sobolev_certify(
    u: &Field,
    s: f64,
    p: f64,
    constant: Option<f64>,
    tol: f64,
) -> Result<CertificateReport> {
    let n = u.grid().dim();
    let q = sobolev_exponent(n, s, p)?;
    let c0 = if p == 2.0 {
        constant.map_or_else(|| sharp_sobolev_constant(n, s), Ok)?
    } else {
        constant.ok_or_else(|| Error::param("C", "a constant is required when p ≠ 2"))?
    };
    let derivative = if p == 2.0 {
        dirichlet_energy(u, s)?.sqrt()
    } else {
        lp_norm(&fractional_laplacian(u, s)?, p)?
    };
    Ok(CertificateReport::new(
        CertificateKind::Sobolev,
        lp_norm(u, q)?,
        c0 * derivative,
        tol,
        CertificateMeta {
            grid: Some(*u.grid()),
            s: Some(s),
            p: Some(p),
            q: Some(q),
            ..Default::default()
        },
    ))
}
