use super::{CertificateKind, CertificateMeta, CertificateReport};
use crate::spectral::{dirichlet_energy, fractional_laplacian, lp_norm};
use crate::{Error, Field, Result};

const RELATION_TOL: f64 = 1e-12;

/// Which set of hypotheses an index tuple was validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnForm {
    /// `p = r = 2`, `m = q`: the L² interpolation form with
    /// `θ = n(q-2)/(2qs)`, admissible for `0 < θ < 1`.
    L2,
    /// General exponents under the Hardy–Littlewood–Sobolev route.
    General,
}

/// Exponents of a fractional Gagliardo–Nirenberg inequality
/// `‖u‖_q <= C ‖(-Δ)^{s/2} u‖_p^θ ‖u‖_r^{1-θ}` (for `m = q`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnIndexSet {
    pub n: usize,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub m: f64,
    pub theta: f64,
    /// Lebesgue exponent reached from `L^p` by the Riesz potential,
    /// `1/p₀ = 1/p - s/n`. `None` when `sp >= n`.
    pub p0: Option<f64>,
    pub form: GnForm,
}

impl GnIndexSet {
    /// `mθ(1/p - s/n) + (q - mθ)/r - 1`.
    pub fn relation_residual(&self) -> f64 {
        let mt = self.m * self.theta;
        mt * (1.0 / self.p - self.s / self.n as f64) + (self.q - mt) / self.r - 1.0
    }

    /// `θ(1/p - s/n) + (1-θ)/r - 1/q`, the `m = q` form of the relation.
    pub fn relation_residual_mq(&self) -> f64 {
        let t = self.theta;
        t * (1.0 / self.p - self.s / self.n as f64) + (1.0 - t) / self.r - 1.0 / self.q
    }
}

fn inadmissible(constraint: &'static str, detail: String) -> Error {
    Error::Inadmissible { constraint, detail }
}

/// Solves the scaling relation `mθ(1/p - s/n) + (q - mθ)/r = 1` for `θ` and
/// validates the hypotheses.
///
/// The L² form (`p = r = 2`, `m = q`) is validated by `0 < s < n` and
/// `0 < θ < 1`; every other tuple needs `1 < p < n/s`, `q ≠ mθ > 0` and
/// `r/(q - mθ) > 1`.
pub fn gn_indices_solve(n: usize, s: f64, p: f64, r: f64, m: f64, q: f64) -> Result<GnIndexSet> {
    if !(1..=3).contains(&n) {
        return Err(inadmissible(
            "n out of range",
            format!("n = {n} must be 1, 2 or 3"),
        ));
    }
    let nf = n as f64;
    if !(s > 0.0 && s < nf) {
        return Err(inadmissible(
            "s out of range",
            format!("need 0 < s < n = {n}, got s = {s}"),
        ));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(inadmissible(
            "r out of range",
            format!("need r > 0, got {r}"),
        ));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(inadmissible(
            "q out of range",
            format!("need q > 0, got {q}"),
        ));
    }
    if m == 0.0 || !m.is_finite() {
        return Err(inadmissible(
            "m nonzero",
            format!("need finite m ≠ 0, got {m}"),
        ));
    }
    let form = if p == 2.0 && r == 2.0 && m == q {
        GnForm::L2
    } else {
        GnForm::General
    };
    if form == GnForm::General && !(p > 1.0 && p < nf / s) {
        return Err(inadmissible(
            "p out of range",
            format!("need 1 < p < n/s = {}, got p = {p}", nf / s),
        ));
    }

    let denom = m * (1.0 / p - s / nf - 1.0 / r);
    let numer = 1.0 - q / r;
    if denom == 0.0 {
        return Err(inadmissible(
            "no admissible theta",
            format!(
                "relation is degenerate (1/p - s/n = 1/r) and requires q = r, got q = {q}, r = {r}"
            ),
        ));
    }
    let theta = numer / denom;
    let mt = m * theta;
    if !(mt > 0.0) {
        return Err(inadmissible("m*theta > 0", format!("m·θ = {mt}")));
    }
    if mt == q {
        return Err(inadmissible("q != m*theta", format!("q = m·θ = {q}")));
    }
    match form {
        GnForm::L2 => {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(inadmissible("theta in (0,1)", format!("θ = {theta}")));
            }
        }
        GnForm::General => {
            let rbar = r / (q - mt);
            if !(rbar > 1.0) {
                return Err(inadmissible(
                    "r/(q - m*theta) > 1",
                    format!("r/(q - mθ) = {rbar}"),
                ));
            }
        }
    }
    let inv_p0 = 1.0 / p - s / nf;
    let idx = GnIndexSet {
        n,
        s,
        p,
        q,
        r,
        m,
        theta,
        p0: (inv_p0 > 0.0).then(|| 1.0 / inv_p0),
        form,
    };
    let res = idx.relation_residual();
    if res.abs() > RELATION_TOL {
        return Err(inadmissible("index relation", format!("residual {res:e}")));
    }
    if m == q && idx.relation_residual_mq().abs() > RELATION_TOL {
        return Err(inadmissible(
            "index relation (m = q)",
            format!("residual {:e}", idx.relation_residual_mq()),
        ));
    }
    Ok(idx)
}

/// Evaluates `‖u‖_q` against `C ‖(-Δ)^{s/2} u‖_p^θ ‖u‖_r^{1-θ}` (the `m = q` form).
///
/// `ratio` in the report is the constant-free quotient, the quantity an
/// extremal search maximizes.
pub fn gn_certify(
    u: &Field,
    idx: &GnIndexSet,
    constant: f64,
    tol: f64,
) -> Result<CertificateReport> {
    if idx.m != idx.q {
        return Err(Error::param(
            "m",
            "only the m = q form is certified; the |u|^m composite form is not supported",
        ));
    }
    crate::spectral::require_dim(u.grid(), idx.n)?;
    if !(constant > 0.0) {
        return Err(Error::param("C", "constant must be positive"));
    }
    if u.is_zero() {
        return Err(Error::ZeroField(
            "Gagliardo–Nirenberg quotient is undefined for u = 0",
        ));
    }
    let top = lp_norm(u, idx.q)?;
    let derivative = if idx.p == 2.0 {
        dirichlet_energy(u, idx.s)?.sqrt()
    } else {
        lp_norm(&fractional_laplacian(u, idx.s)?, idx.p)?
    };
    let base = lp_norm(u, idx.r)?;
    let denom = derivative.powf(idx.theta) * base.powf(1.0 - idx.theta);
    let mut rep = CertificateReport::new(
        CertificateKind::GagliardoNirenberg,
        top,
        constant * denom,
        tol,
        CertificateMeta {
            grid: Some(*u.grid()),
            s: Some(idx.s),
            p: Some(idx.p),
            q: Some(idx.q),
            r: Some(idx.r),
            theta: Some(idx.theta),
            k: None,
        },
    );
    rep.ratio = top / denom;
    Ok(rep)
}
