use super::{CertificateKind, CertificateMeta, CertificateReport};
use crate::rearrange::schwarz_rearrange;
use crate::spectral::{dirichlet_energy, transform};
use crate::{Error, Field, Result};

/// Compares `‖(-Δ)^{s/2} u*‖₂²` (lhs) with `‖(-Δ)^{s/2} u‖₂²` (rhs), `0 <= s <= 1`.
pub fn polya_szego_certify(u: &Field, s: f64, tol: f64) -> Result<CertificateReport> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::param("s", format!("must lie in [0, 1], got {s}")));
    }
    let star = schwarz_rearrange(u)?;
    let lhs = dirichlet_energy(&star, s)?;
    let rhs = dirichlet_energy(u, s)?;
    Ok(CertificateReport::new(
        CertificateKind::PolyaSzego,
        lhs,
        rhs,
        tol,
        CertificateMeta {
            grid: Some(*u.grid()),
            s: Some(s),
            ..Default::default()
        },
    ))
}

/// `L^{-n} Σ (1+|ξ|²)^{-k} |û|²`, the Bessel-kernel self pairing of `u`.
pub(crate) fn bessel_pairing(u: &Field, k: u32) -> f64 {
    transform(u).weighted_energy(|xi2| (1.0 + xi2).powi(-(k as i32)))
}

/// Bessel pairing of `u` (lhs) against that of `u*` (rhs).
///
/// Rearrangement increases this pairing, so the certificate reads `lhs <= rhs`.
pub fn bessel_pairing_check(u: &Field, k: u32, tol: f64) -> Result<CertificateReport> {
    if k == 0 {
        return Err(Error::param("k", "Bessel order index must be >= 1"));
    }
    let star = schwarz_rearrange(u)?;
    Ok(CertificateReport::new(
        CertificateKind::BesselPairing,
        bessel_pairing(u, k),
        bessel_pairing(&star, k),
        tol,
        CertificateMeta {
            grid: Some(*u.grid()),
            k: Some(k),
            ..Default::default()
        },
    ))
}
