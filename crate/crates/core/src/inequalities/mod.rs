//! Numerical certificates for the fractional functional inequalities.
//!
//! Each certifier evaluates both sides of an inequality on a concrete field
//! and returns a [`CertificateReport`]. Because the discrete objects only
//! approximate their continuum counterparts, certificates use a relative
//! tolerance: `satisfied ⇔ lhs <= rhs·(1 + tol)`.

mod compactness;
mod gagliardo_nirenberg;
mod polya_szego;
mod series;
mod sobolev;

pub use compactness::{compactness_diagnostic, mollifier, CompactnessReport};
pub use gagliardo_nirenberg::{gn_certify, gn_indices_solve, GnForm, GnIndexSet};
pub use polya_szego::{bessel_pairing_check, polya_szego_certify};
pub use series::{multiplier_series_check, SeriesCheck, SeriesTerm};
pub use sobolev::{sharp_sobolev_constant, sobolev_certify, sobolev_exponent};

use std::fmt;

use crate::record::Record;
use crate::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    PolyaSzego,
    BesselPairing,
    GagliardoNirenberg,
    Sobolev,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::PolyaSzego => "polya-szego",
            CertificateKind::BesselPairing => "bessel-pairing",
            CertificateKind::GagliardoNirenberg => "gagliardo-nirenberg",
            CertificateKind::Sobolev => "sobolev",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters a certificate was evaluated with.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CertificateMeta {
    pub grid: Option<Grid>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub k: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, except for Gagliardo–Nirenberg where it is the
    /// constant-free quotient `‖u‖_q / (‖Λ^s u‖_p^θ ‖u‖_r^{1-θ})`.
    pub ratio: f64,
    pub satisfied: bool,
    /// `(rhs - lhs) / rhs`.
    pub slack: f64,
    pub tolerance: f64,
    pub meta: CertificateMeta,
}

impl CertificateReport {
    pub(crate) fn new(
        kind: CertificateKind,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        meta: CertificateMeta,
    ) -> Self {
        let slack = relative_slack(lhs, rhs);
        CertificateReport {
            kind,
            lhs,
            rhs,
            ratio: if rhs == 0.0 && lhs == 0.0 {
                1.0
            } else {
                lhs / rhs
            },
            satisfied: lhs <= rhs * (1.0 + tolerance),
            slack,
            tolerance,
            meta,
        }
    }

    /// `kind= n= s= p= q= r= theta= lhs= rhs= ratio= slack= satisfied= grid=`.
    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        r.push("kind", self.kind.as_str());
        match self.meta.grid {
            Some(g) => r.push("n", g.dim().to_string()),
            None => r.push("n", "-"),
        };
        r.push_opt_real("s", self.meta.s)
            .push_opt_real("p", self.meta.p)
            .push_opt_real("q", self.meta.q)
            .push_opt_real("r", self.meta.r)
            .push_opt_real("theta", self.meta.theta)
            .push_real("lhs", self.lhs)
            .push_real("rhs", self.rhs)
            .push_real("ratio", self.ratio)
            .push_real("slack", self.slack)
            .push("satisfied", self.satisfied.to_string());
        match self.meta.grid {
            Some(g) => r.push("grid", g.to_string()),
            None => r.push("grid", "-"),
        };
        r
    }
}

pub(crate) fn relative_slack(lhs: f64, rhs: f64) -> f64 {
    if rhs == 0.0 {
        if lhs == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        (rhs - lhs) / rhs
    }
}
