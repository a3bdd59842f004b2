//! Weighted power nonlinearities `F(r, u) = a(r)·|u|^{l+2}/(l+2)` and a
//! sampler that checks the structural assumptions on `F`.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::record::{fmt_real, Record};
use crate::{Error, Result};

/// Radial weight `a(r)`: bounded, nonnegative, nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `a(r) = value`.
    Constant { value: f64 },
    /// `a(r) = amplitude·e^{-rate·r}`.
    Exponential { amplitude: f64, rate: f64 },
    /// `a(r) = amplitude / (1 + (r/scale)^power)`.
    Rational {
        amplitude: f64,
        scale: f64,
        power: f64,
    },
}

impl Profile {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Profile::Constant { value } => value,
            Profile::Exponential { amplitude, rate } => amplitude * (-rate * r).exp(),
            Profile::Rational {
                amplitude,
                scale,
                power,
            } => amplitude / (1.0 + (r / scale).powf(power)),
        }
    }

    /// `sup a = a(0)`.
    pub fn sup(&self) -> f64 {
        self.eval(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.sup() == 0.0
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Constant { .. } => "const",
            Profile::Exponential { .. } => "exp",
            Profile::Rational { .. } => "rational",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Profile::Constant { value } => vec![value],
            Profile::Exponential { amplitude, rate } => vec![amplitude, rate],
            Profile::Rational {
                amplitude,
                scale,
                power,
            } => vec![amplitude, scale, power],
        }
    }

    pub fn from_parts(name: &str, params: &[f64]) -> Result<Profile> {
        let want = |k: usize| -> Result<()> {
            if params.len() != k {
                return Err(Error::param(
                    "params",
                    format!(
                        "profile `{name}` takes {k} parameter(s), got {}",
                        params.len()
                    ),
                ));
            }
            Ok(())
        };
        let profile = match name {
            "const" => {
                want(1)?;
                Profile::Constant { value: params[0] }
            }
            "exp" => {
                want(2)?;
                Profile::Exponential {
                    amplitude: params[0],
                    rate: params[1],
                }
            }
            "rational" => {
                want(3)?;
                Profile::Rational {
                    amplitude: params[0],
                    scale: params[1],
                    power: params[2],
                }
            }
            other => return Err(Error::param("a", format!("unknown profile `{other}`"))),
        };
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Profile::Constant { value } => value >= 0.0 && value.is_finite(),
            Profile::Exponential { amplitude, rate } => {
                amplitude >= 0.0 && amplitude.is_finite() && rate >= 0.0 && rate.is_finite()
            }
            Profile::Rational {
                amplitude,
                scale,
                power,
            } => amplitude >= 0.0 && amplitude.is_finite() && scale > 0.0 && power > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(
                "a",
                format!("profile {self:?} is not bounded, nonnegative and nonincreasing"),
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    WeightedPower,
}

impl Family {
    pub fn name(&self) -> &'static str {
        "power"
    }
}

/// Growth class of the exponent `l` relative to `4s/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

impl fmt::Display for Criticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criticality::Subcritical => "subcritical",
            Criticality::Critical => "critical",
            Criticality::Supercritical => "supercritical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearitySpec {
    pub family: Family,
    pub profile: Profile,
    /// Growth exponent `l > 0`.
    pub l: f64,
    /// Growth constant `K > 0` in `0 <= F <= K(u² + u^{l+2})`.
    pub growth: f64,
    /// Fractional order the spec is used with.
    pub s: f64,
    /// Spatial dimension the spec is used with.
    pub n: usize,
}

// 5-point Gauss–Legendre nodes and weights on [-1, 1]
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

impl NonlinearitySpec {
    pub fn power(profile: Profile, l: f64, growth: f64, s: f64, n: usize) -> Result<Self> {
        profile.validate()?;
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::param(
                "l",
                format!("growth exponent must be > 0, got {l}"),
            ));
        }
        if !(growth > 0.0 && growth.is_finite()) {
            return Err(Error::param(
                "K",
                format!("growth constant must be > 0, got {growth}"),
            ));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::param("s", format!("must be > 0, got {s}")));
        }
        if !(1..=3).contains(&n) {
            return Err(Error::param("n", format!("must be 1, 2 or 3, got {n}")));
        }
        Ok(NonlinearitySpec {
            family: Family::WeightedPower,
            profile,
            l,
            growth,
            s,
            n,
        })
    }

    /// `F ≡ 0`, represented as the power family with a zero weight.
    pub fn zero(s: f64, n: usize) -> Result<Self> {
        Self::power(Profile::Constant { value: 0.0 }, 1.0, 1.0, s, n)
    }

    /// Same family and parameters with a different `(s, n)` context.
    pub fn with_context(mut self, s: f64, n: usize) -> Result<Self> {
        self.s = s;
        self.n = n;
        Self::power(self.profile, self.l, self.growth, s, n)
    }

    pub fn is_zero(&self) -> bool {
        self.profile.is_zero()
    }

    /// `F(r, u) = ∫_0^u f(r, t) dt`.
    pub fn big_f(&self, r: f64, u: f64) -> f64 {
        self.profile.eval(r) * u.abs().powf(self.l + 2.0) / (self.l + 2.0)
    }

    /// `f(r, u) = ∂F/∂u = a(r)|u|^l u`.
    pub fn small_f(&self, r: f64, u: f64) -> f64 {
        self.profile.eval(r) * u.abs().powf(self.l) * u
    }

    /// `F(r, to) - F(r, from)` without cancellation for nearby arguments.
    pub fn increment(&self, r: f64, from: f64, to: f64) -> f64 {
        if from == to {
            return 0.0;
        }
        let span = (to - from).abs();
        let same_sign = from.signum() == to.signum() && from != 0.0 && to != 0.0;
        if same_sign && span <= 0.05 * from.abs().max(to.abs()) {
            let mid = 0.5 * (from + to);
            let half = 0.5 * (to - from);
            let a = self.profile.eval(r);
            let sum: f64 = GL_NODES
                .iter()
                .zip(GL_WEIGHTS)
                .map(|(x, w)| {
                    let t = mid + half * x;
                    w * t.abs().powf(self.l) * t
                })
                .sum();
            a * half * sum
        } else {
            self.big_f(r, to) - self.big_f(r, from)
        }
    }

    /// Classification of `l` against `4s/n`.
    pub fn criticality(&self) -> Criticality {
        let threshold = 4.0 * self.s / self.n as f64;
        match self.l.partial_cmp(&threshold) {
            Some(Ordering::Less) => Criticality::Subcritical,
            Some(Ordering::Equal) => Criticality::Critical,
            _ => Criticality::Supercritical,
        }
    }

    /// `family= l= K= a= params=`.
    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        let params: Vec<String> = self.profile.params().iter().map(|p| fmt_real(*p)).collect();
        r.push("family", self.family.name())
            .push_real("l", self.l)
            .push_real("K", self.growth)
            .push("a", self.profile.name())
            .push("params", params.join(","));
        r
    }

    /// Builds a spec from `family`, `l`, `K`, `a`, `params` entries.
    pub fn from_entries<'a>(
        mut get: impl FnMut(&str) -> Option<&'a str>,
        s: f64,
        n: usize,
    ) -> Result<Self> {
        let family = get("family").unwrap_or("power");
        if family != "power" {
            return Err(Error::param("family", format!("unknown family `{family}`")));
        }
        let num = |key: &'static str, v: Option<&str>| -> Result<f64> {
            let v = v.ok_or_else(|| Error::param(key, "missing"))?;
            v.parse()
                .map_err(|_| Error::param(key, format!("bad number `{v}`")))
        };
        let l = num("l", get("l"))?;
        let growth = num("K", get("K"))?;
        let a = get("a").unwrap_or("const");
        let params: Vec<f64> = match get("params") {
            None => vec![1.0],
            Some(p) => p
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::param("params", format!("bad number `{t}`")))
                })
                .collect::<Result<_>>()?,
        };
        Self::power(Profile::from_parts(a, &params)?, l, growth, s, n)
    }
}

/// Sampling domain for [`check_assumptions`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub radii: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub amplitudes: usize,
    pub u_max: f64,
    /// Ladder of `ε` for the small-amplitude decay condition.
    pub epsilons: Vec<f64>,
    /// Extra uniformly random `(r, u)` samples for the pointwise checks.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            radii: 64,
            r_min: 1e-3,
            r_max: 1e3,
            amplitudes: 64,
            u_max: 10.0,
            epsilons: vec![1.0, 1e-1, 1e-2, 1e-3],
            random_samples: 256,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    fn radii(&self) -> Vec<f64> {
        let (a, b) = (self.r_min.ln(), self.r_max.ln());
        let n = self.radii.max(2);
        (0..n)
            .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    fn amplitudes(&self) -> Vec<f64> {
        let n = self.amplitudes.max(2);
        (0..n)
            .map(|i| self.u_max * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Concrete sample where an inequality was evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<(&'static str, f64)>,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.point {
            write!(f, "{k}:{},", fmt_real(*v))?;
        }
        write!(f, "lhs:{},rhs:{}", fmt_real(self.lhs), fmt_real(self.rhs))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionOutcome {
    pub holds: bool,
    /// Failing sample when `holds` is false, otherwise the tightest sample (if any).
    pub witness: Option<Witness>,
}

impl AssumptionOutcome {
    fn pass() -> Self {
        AssumptionOutcome {
            holds: true,
            witness: None,
        }
    }
}

/// Result of the small-amplitude decay check for one `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayThreshold {
    pub epsilon: f64,
    /// `(R₀, s₀)` found on the samples, if any.
    pub found: Option<(f64, f64)>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// Carathéodory regularity: not numerically checkable, holds by
    /// construction for the closed-form families.
    pub f0_assumed: bool,
    /// `F(r, u) <= F(r, |u|)`.
    pub f1: AssumptionOutcome,
    /// `0 <= F(r, u) <= K(u² + u^{l+2})` for `u >= 0`.
    pub f2: AssumptionOutcome,
    /// For each `ε`, `F(r, u) <= ε u²` for `r >= R₀`, `0 <= u < s₀`.
    pub f3: Vec<DecayThreshold>,
    /// Displayed form `F(r,a) + F(R,A) >= F(r,A) + F(R,a)` for `r < R`, `a < A`.
    pub f4_displayed: AssumptionOutcome,
    pub f4_displayed_strict: bool,
    /// Supermodularity of `(t, y) ↦ F(1/t, y)`, which reverses the roles of `r` and `R`.
    pub f4_inverse_radius: AssumptionOutcome,
    pub f4_inverse_radius_strict: bool,
}

impl AssumptionReport {
    pub fn f3_holds(&self) -> bool {
        self.f3.iter().all(|d| d.found.is_some())
    }

    /// Verdict under the displayed orientation.
    pub fn all_hold(&self) -> bool {
        self.f1.holds && self.f2.holds && self.f3_holds() && self.f4_displayed.holds
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new();
        let w = |o: &Option<Witness>| o.as_ref().map_or("-".to_string(), |w| w.to_string());
        r.push("F0", "assumed")
            .push("F1", self.f1.holds.to_string())
            .push("F1_witness", w(&self.f1.witness))
            .push("F2", self.f2.holds.to_string())
            .push("F2_witness", w(&self.f2.witness))
            .push("F3", self.f3_holds().to_string());
        let ladder: Vec<String> = self
            .f3
            .iter()
            .map(|d| match d.found {
                Some((r0, s0)) => {
                    format!("{}:{}:{}", fmt_real(d.epsilon), fmt_real(r0), fmt_real(s0))
                }
                None => format!("{}:none", fmt_real(d.epsilon)),
            })
            .collect();
        r.push("F3_ladder", ladder.join(";"))
            .push("F4", self.f4_displayed.holds.to_string())
            .push("F4_strict", self.f4_displayed_strict.to_string())
            .push("F4_witness", w(&self.f4_displayed.witness))
            .push("F4_orientation", "displayed")
            .push(
                "F4_inverse_radius",
                self.f4_inverse_radius.holds.to_string(),
            )
            .push(
                "F4_inverse_radius_strict",
                self.f4_inverse_radius_strict.to_string(),
            );
        r
    }
}

const CMP_TOL: f64 = 1e-12;

/// Samples the assumptions on `F` over the configured `(r, u)` domain.
///
/// Failures are report content, never errors. The result depends only on the
/// spec and the sampler configuration (including its seed).
pub fn check_assumptions(spec: &NonlinearitySpec, cfg: &SamplerConfig) -> AssumptionReport {
    let radii = cfg.radii();
    let amps = cfg.amplitudes();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pointwise: Vec<(f64, f64)> = radii
        .iter()
        .flat_map(|&r| amps.iter().map(move |&u| (r, u)))
        .collect();
    for _ in 0..cfg.random_samples {
        let r = (rng.random_range(cfg.r_min.ln()..cfg.r_max.ln())).exp();
        let u = rng.random_range(0.0..cfg.u_max);
        pointwise.push((r, u));
    }

    // F1 on signed samples
    let mut f1 = AssumptionOutcome::pass();
    for &(r, u) in &pointwise {
        for v in [u, -u] {
            let lhs = spec.big_f(r, v);
            let rhs = spec.big_f(r, v.abs());
            if lhs > rhs + CMP_TOL * rhs.abs() {
                f1 = AssumptionOutcome {
                    holds: false,
                    witness: Some(Witness {
                        point: vec![("r", r), ("u", v)],
                        lhs,
                        rhs,
                    }),
                };
                break;
            }
        }
        if !f1.holds {
            break;
        }
    }

    // F2 on nonnegative samples; keep the worst ratio
    let mut f2 = AssumptionOutcome::pass();
    let mut worst = f64::NEG_INFINITY;
    for &(r, u) in &pointwise {
        let value = spec.big_f(r, u);
        let bound = spec.growth * (u * u + u.powf(spec.l + 2.0));
        let excess = if value < 0.0 {
            f64::INFINITY
        } else if bound > 0.0 {
            value / bound - 1.0
        } else if value > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        if excess > worst {
            worst = excess;
            f2.witness = Some(Witness {
                point: vec![("r", r), ("u", u)],
                lhs: value,
                rhs: bound,
            });
        }
    }
    f2.holds = worst <= CMP_TOL;
    if f2.holds {
        f2.witness = None;
    }

    let f3 = cfg
        .epsilons
        .iter()
        .map(|&eps| decay_threshold(spec, &radii, cfg.u_max, eps))
        .collect();

    // F4 on all sampled rectangles, tabulated once
    let table: Vec<Vec<f64>> = radii
        .iter()
        .map(|&r| amps.iter().map(|&u| spec.big_f(r, u)).collect())
        .collect();
    let mut worst_disp: Option<(f64, Witness)> = None;
    let mut worst_inv: Option<(f64, Witness)> = None;
    let mut strict_disp = true;
    let mut strict_inv = true;
    for i in 0..radii.len() {
        for j in i + 1..radii.len() {
            for a in 0..amps.len() {
                for b in a + 1..amps.len() {
                    // F(r,a) + F(R,A) - F(r,A) - F(R,a)
                    let margin = (table[i][a] - table[i][b]) - (table[j][a] - table[j][b]);
                    let scale = table[i][b]
                        .abs()
                        .max(table[j][b].abs())
                        .max(f64::MIN_POSITIVE);
                    let zero = margin.abs() <= CMP_TOL * scale;
                    strict_disp &= !zero && margin > 0.0;
                    strict_inv &= !zero && margin < 0.0;
                    let witness = || Witness {
                        point: vec![
                            ("r", radii[i]),
                            ("R", radii[j]),
                            ("a", amps[a]),
                            ("A", amps[b]),
                        ],
                        lhs: table[i][a] + table[j][b],
                        rhs: table[i][b] + table[j][a],
                    };
                    if !zero && margin < 0.0 && worst_disp.as_ref().is_none_or(|(m, _)| margin < *m)
                    {
                        worst_disp = Some((margin, witness()));
                    }
                    if !zero && margin > 0.0 && worst_inv.as_ref().is_none_or(|(m, _)| -margin < *m)
                    {
                        let mut w = witness();
                        // inverse-radius orientation compares the swapped sums
                        std::mem::swap(&mut w.lhs, &mut w.rhs);
                        worst_inv = Some((-margin, w));
                    }
                }
            }
        }
    }
    let outcome = |worst: Option<(f64, Witness)>| match worst {
        None => AssumptionOutcome::pass(),
        Some((_, w)) => AssumptionOutcome {
            holds: false,
            witness: Some(w),
        },
    };

    AssumptionReport {
        f0_assumed: true,
        f1,
        f2,
        f3,
        f4_displayed: outcome(worst_disp),
        f4_displayed_strict: strict_disp,
        f4_inverse_radius: outcome(worst_inv),
        f4_inverse_radius_strict: strict_inv,
    }
}

/// Searches the largest `s₀ = u_max·2^{-j}` (and, for it, the smallest
/// sampled `R₀`) with `F(r, u) <= ε u²` on all samples `r >= R₀`,
/// `u = s₀·k/16`, `k = 1..15`.
fn decay_threshold(spec: &NonlinearitySpec, radii: &[f64], u_max: f64, eps: f64) -> DecayThreshold {
    let mut last_witness = None;
    for j in 0..60 {
        let s0 = u_max * 0.5f64.powi(j);
        let us: Vec<f64> = (1..16).map(|k| s0 * k as f64 / 16.0).collect();
        // radii are ascending: find the first start index from which all rows pass
        let row_ok: Vec<Option<Witness>> = radii
            .iter()
            .map(|&r| {
                us.iter().find_map(|&u| {
                    let lhs = spec.big_f(r, u);
                    let rhs = eps * u * u;
                    (lhs > rhs * (1.0 + CMP_TOL)).then(|| Witness {
                        point: vec![("epsilon", eps), ("r", r), ("u", u)],
                        lhs,
                        rhs,
                    })
                })
            })
            .collect();
        let mut start = radii.len();
        while start > 0 && row_ok[start - 1].is_none() {
            start -= 1;
        }
        if start < radii.len() {
            return DecayThreshold {
                epsilon: eps,
                found: Some((radii[start], s0)),
                witness: None,
            };
        }
        last_witness = row_ok.into_iter().flatten().last();
    }
    DecayThreshold {
        epsilon: eps,
        found: None,
        witness: last_witness,
    }
}
