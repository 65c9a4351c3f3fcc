//! The CH0-triviality decision pipeline.
//!
//! Inputs are quadric surface bundles; the verdict is one of RATIONAL,
//! NOT_UNIV_CH0_TRIVIAL, UNIV_CH0_TRIVIAL or UNKNOWN, with an evidence
//! record per criterion that fired. UNKNOWN is a first-class answer: for
//! the definite real form with positive separable p, sufficiency is only
//! known through the implemented criteria, and nothing here guesses beyond
//! them.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::{exact_div_u_plus_v, fmt_rat, rat, real_root_count, Rat, UniPoly};
use crate::fibration::{
    brauer_obstruction, effective_not_type_i, real_components_diagonal, FibrationSpec,
};
use crate::galois::{zarhin_sn_certificate, SnCertificate, DEFAULT_PRIME_BUDGET};
use crate::soscert::{criterion_a_certificate, SOSCertificate};
use crate::Error;

/// Weierstrass data of the elliptic curve `z^2 = u(u^2 + a u + b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticInvariants {
    #[serde(with = "rat_string")]
    pub a: Rat,
    #[serde(with = "rat_string")]
    pub b: Rat,
    #[serde(with = "rat_string")]
    pub disc: Rat,
    #[serde(with = "rat_string")]
    pub j: Rat,
}

mod rat_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        crate::exactmath::parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Exact Weierstrass discriminant and j-invariant:
/// `disc = -16 b^2 (4b - a^2)`, `j = 256 (3b - a^2)^3 / (b^2 (4b - a^2))`.
pub fn elliptic_invariants(p: &UniPoly) -> crate::Result<EllipticInvariants> {
    if p.degree() != Some(2) || !p.is_monic() {
        return Err(Error::Precondition("need a monic quadratic".into()));
    }
    let a = p.coeff(1);
    let b = p.coeff(0);
    if b.is_zero() {
        return Err(Error::Precondition("need p(0) != 0".into()));
    }
    let asq = &a * &a;
    let four_b_less = &(rat(4, 1) * &b) - &asq;
    if four_b_less.is_zero() {
        return Err(Error::Precondition("p must be separable".into()));
    }
    let disc = -(rat(16, 1) * &b * &b * &four_b_less);
    let cubed = {
        let t = &(rat(3, 1) * &b) - &asq;
        &(&t * &t) * &t
    };
    let j = rat(256, 1) * cubed / (&b * &b * &four_b_less);
    Ok(EllipticInvariants { a, b, disc, j })
}

/// The thirteen rational j-invariants of elliptic curves with complex
/// multiplication, with the discriminant of the endomorphism order. These
/// are the imaginary quadratic orders of class number one; the acceptance
/// suite re-derives both columns independently (form-class enumeration for
/// the discriminant list, q-expansion evaluation for the j-values).
pub const RATIONAL_CM_J: [(i64, i64); 13] = [
    (-3, 0),
    (-4, 1728),
    (-7, -3375),
    (-8, 8000),
    (-11, -32768),
    (-12, 54000),
    (-16, 287496),
    (-19, -884736),
    (-27, -12288000),
    (-28, 16581375),
    (-43, -884736000),
    (-67, -147197952000),
    (-163, -262537412640768000),
];

/// Outcome of the complex-multiplication parity criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMVerdict {
    pub is_cm_rational_j: bool,
    pub order_disc: Option<i64>,
    /// Order discriminant congruent to 1 mod 4, equivalently the order is
    /// generated by an integer with odd trace.
    pub parity_pass: bool,
}

/// Match j against the rational CM table and test the odd-trace parity:
/// the order discriminant d^2 - 4c is 1 mod 4 exactly when d is odd.
pub fn cm_criterion(p: &UniPoly) -> crate::Result<CMVerdict> {
    let inv = elliptic_invariants(p)?;
    let j_int = if inv.j.denom().is_one() {
        inv.j.numer().to_i64()
    } else {
        None
    };
    let hit = j_int.and_then(|j| RATIONAL_CM_J.iter().find(|&&(_, jj)| jj == j));
    match hit {
        Some(&(disc, _)) => Ok(CMVerdict {
            is_cm_rational_j: true,
            order_disc: Some(disc),
            parity_pass: disc.rem_euclid(4) == 1,
        }),
        None => Ok(CMVerdict {
            is_cm_rational_j: false,
            order_disc: None,
            parity_pass: false,
        }),
    }
}

/// Admissibility of a lattice parameter `tau = 1/2 + (k / 2 beta) sqrt(D)`:
/// D negative and 1 mod 4, k and beta positive odd, beta dividing k^2 D.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauAdmissibility {
    pub admissible: bool,
    /// The imaginary part is y = k sqrt(|D|) / (2 beta), kept symbolic.
    pub y: (i64, i64, i64),
    pub reasons: Vec<String>,
}

pub fn cm_tau_admissible(d: i64, k: i64, beta: i64) -> TauAdmissibility {
    let mut reasons = Vec::new();
    if d >= 0 {
        reasons.push("D must be negative".into());
    }
    if d.rem_euclid(4) != 1 {
        reasons.push("D must be 1 mod 4".into());
    }
    if k <= 0 || k % 2 == 0 {
        reasons.push("k must be positive odd".into());
    }
    if beta <= 0 || beta % 2 == 0 {
        reasons.push("beta must be positive odd".into());
    }
    if beta != 0
        && (k.checked_mul(k).and_then(|k2| k2.checked_mul(d))).is_none_or(|k2d| k2d % beta != 0)
    {
        reasons.push("beta must divide k^2 D".into());
    }
    TauAdmissibility {
        admissible: reasons.is_empty(),
        y: (k, beta, d.unsigned_abs() as i64),
        reasons,
    }
}

/// The family y = k / (2 sqrt(n^2 + 2)) for odd n, k: tau parameters whose
/// lattices have odd-trace endomorphism orders. Returns (D, k, beta).
pub fn tau_family(n: i64, k: i64) -> (i64, i64, i64) {
    let beta = n * n + 2;
    (-beta, k, beta)
}

/// Check the situation hypotheses on p: separable, monic, nonconstant of
/// even degree, p(0) nonzero, strictly positive on the reals. Returns the
/// list of violations; empty means all hold.
pub fn situation_check(p: &UniPoly) -> Vec<String> {
    let mut v = Vec::new();
    if p.is_zero() {
        v.push("p is zero".into());
        return v;
    }
    if !p.is_squarefree() {
        v.push("p is not separable".into());
    }
    if !p.is_monic() {
        v.push("p is not monic".into());
    }
    match p.degree() {
        Some(0) | None => v.push("p is constant".into()),
        Some(d) if d % 2 == 1 => v.push("p has odd degree".into()),
        _ => {}
    }
    if p.eval(&Rat::zero()).is_zero() {
        v.push("p(0) = 0".into());
    }
    if !p.is_constant() && !(p.lc().is_positive() && real_root_count(p) == 0) {
        v.push("p is not positive on R".into());
    }
    v
}

/// Criterion A: for quadratic p with b >= a^2/3, the explicit three-square
/// decomposition of r(u, v). None when inapplicable.
pub fn criterion_a(p: &UniPoly) -> crate::Result<Option<SOSCertificate>> {
    if !situation_check(p).is_empty() {
        return Ok(None);
    }
    criterion_a_certificate(p)
}

/// Criterion B outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionB {
    Pass,
    Fail(String),
}

/// Criterion B: p even with nonnegative coefficients. The residual r(u, v)
/// is then nonnegative on the plane, which settles the four-square property
/// without an explicit certificate.
pub fn criterion_b(p: &UniPoly) -> CriterionB {
    if !situation_check(p).is_empty() {
        return CriterionB::Fail("situation hypotheses violated".into());
    }
    let coeffs = p.coeffs();
    for (i, c) in coeffs.iter().enumerate() {
        if i == coeffs.len() - 1 {
            continue;
        }
        if i % 2 == 1 && !c.is_zero() {
            return CriterionB::Fail(format!("odd coefficient a_{i} is nonzero"));
        }
        if i % 2 == 0 && c.is_negative() {
            return CriterionB::Fail(format!("even coefficient a_{i} is negative"));
        }
    }
    if !p.coeff(0).is_positive() {
        return CriterionB::Fail("constant term is not positive".into());
    }
    CriterionB::Pass
}

/// Outcome of the sound-but-incomplete positivity test for r(u, v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// r >= 0 on the plane, certified exactly.
    PatternCertified,
    /// An exact rational point with r < 0.
    Counterexample {
        u: Rat,
        v: Rat,
        value: Rat,
    },
    Unknown,
}

/// Decide nonnegativity of `r(u,v) = (u p(u) + v p(-v)) / (u+v)` where a
/// sound pattern applies:
/// - substituting u = t v groups r into coefficient polynomials
///   `a_i h_i(t) v^i`; when every odd a_i vanishes and every even one is
///   nonnegative, each factor h_i is certified positive by Sturm;
/// - quadratic p admits an exact minimum, giving either a certificate or a
///   rational counterexample;
/// - otherwise a rational grid searches for a counterexample, and absent
///   one the answer is Unknown.
pub fn positivity_rtv(p: &UniPoly) -> crate::Result<Positivity> {
    if !situation_check(p).is_empty() {
        return Ok(Positivity::Unknown);
    }
    let r = exact_div_u_plus_v(p)?;

    // exact quadratic minimum: min r = b - a^2/3 at (-a/3, a/3)
    if p.degree() == Some(2) {
        let a = p.coeff(1);
        let b = p.coeff(0);
        let min = &b - &(&a * &a) / rat(3, 1);
        return Ok(if min.is_negative() {
            let u = -&a / rat(3, 1);
            let v = &a / rat(3, 1);
            debug_assert_eq!(r.eval(&u, &v), min);
            Positivity::Counterexample { u, v, value: min }
        } else {
            Positivity::PatternCertified
        });
    }

    // even-coefficient pattern: r(tv, v) = sum a_i h_i(t) v^i with
    // h_i = (t^(i+1) - (-1)^(i+1)) / (t + 1)
    if matches!(criterion_b(p), CriterionB::Pass) {
        let groups = r.substitute_u_tv();
        let mut certified = true;
        for (i, h) in groups.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            if i % 2 == 1 {
                certified = false;
                break;
            }
            // h must be positive on R for the term to be nonnegative
            if !h.is_positive_definite() {
                certified = false;
                break;
            }
        }
        if certified {
            return Ok(Positivity::PatternCertified);
        }
    }

    // counterexample search on a rational grid
    for nu in -24..=24i64 {
        for nv in -24..=24i64 {
            let u = rat(nu, 4);
            let v = rat(nv, 4);
            let value = r.eval(&u, &v);
            if value.is_negative() {
                return Ok(Positivity::Counterexample { u, v, value });
            }
        }
    }
    Ok(Positivity::Unknown)
}

/// Final verdict labels, in the output wire format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "RATIONAL")]
    Rational,
    #[serde(rename = "NOT_UNIV_CH0_TRIVIAL")]
    NotUnivCh0Trivial,
    #[serde(rename = "UNIV_CH0_TRIVIAL")]
    UnivCh0Trivial,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Rational => "RATIONAL",
            Status::NotUnivCh0Trivial => "NOT_UNIV_CH0_TRIVIAL",
            Status::UnivCh0Trivial => "UNIV_CH0_TRIVIAL",
            Status::Unknown => "UNKNOWN",
        };
        write!(f, "{s}")
    }
}

/// One evidence record: which check fired and what it saw.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Evidence {
    pub criterion: String,
    pub summary: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

impl Evidence {
    fn new(criterion: &str, summary: impl Into<String>) -> Evidence {
        Evidence {
            criterion: criterion.into(),
            summary: summary.into(),
            data: serde_json::Value::Null,
        }
    }

    fn with_data(mut self, data: serde_json::Value) -> Evidence {
        self.data = data;
        self
    }
}

/// Verdict plus all the evidence gathered on the way.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub reasons: Vec<Evidence>,
}

impl Verdict {
    /// Structural sanity: positive and negative evidence never mix.
    pub fn consistent(&self) -> bool {
        let positive = ["criterion-a", "criterion-b", "positivity", "cm-parity"];
        let negative = ["components", "brauer"];
        let has_pos = self
            .reasons
            .iter()
            .any(|e| positive.contains(&e.criterion.as_str()) && e.summary.starts_with("pass"));
        match self.status {
            Status::UnivCh0Trivial => has_pos,
            Status::NotUnivCh0Trivial => {
                !has_pos
                    && self
                        .reasons
                        .iter()
                        .any(|e| negative.contains(&e.criterion.as_str()))
            }
            _ => true,
        }
    }
}

fn components_evidence(s: usize) -> Evidence {
    Evidence::new(
        "components",
        format!("real locus has {s} connected component(s)"),
    )
    .with_data(serde_json::json!({ "components": s }))
}

/// The full pipeline. Order: rationality shortcut, component count, Brauer
/// obstruction off type (I), then the constructive criteria on the definite
/// standard form, cheapest first; every passing criterion is recorded.
pub fn analyze(fib: &FibrationSpec) -> crate::Result<Verdict> {
    analyze_with_budget(fib, default_prime_budget())
}

/// Prime budget for the endomorphism-ring context, overridable through the
/// QFIB_PRIME_BUDGET environment variable.
pub fn default_prime_budget() -> usize {
    std::env::var("QFIB_PRIME_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_PRIME_BUDGET)
}

pub fn analyze_with_budget(fib: &FibrationSpec, budget: usize) -> crate::Result<Verdict> {
    let mut reasons = Vec::new();

    // (1) Witt shortcut for definite forms (standard with a = b = -1, or
    // diagonal with positive constants in the first three slots)
    if let Ok(true) = crate::fibration::witt_rational(fib) {
        reasons.push(Evidence::new(
            "witt",
            "pass: right side nonnegative on the whole real line, a section exists",
        ));
        return Ok(Verdict {
            status: Status::Rational,
            reasons,
        });
    }

    // (2) component count
    let s = real_components_diagonal(fib)?;
    reasons.push(components_evidence(s));
    if s != 1 {
        return Ok(Verdict {
            status: Status::NotUnivCh0Trivial,
            reasons,
        });
    }

    // (3) Brauer obstruction off type (I)
    if effective_not_type_i(fib)? {
        let obs = brauer_obstruction(fib)?;
        let ev = Evidence::new(
            "brauer",
            if obs.obstructed {
                "pass: unramified Brauer class survives"
            } else {
                "fail: obstruction set below threshold"
            },
        )
        .with_data(serde_json::json!({
            "disc_is_square": obs.disc_is_square,
            "t_points": obs.t_points.iter().map(|p| p.label()).collect::<Vec<_>>(),
        }));
        reasons.push(ev);
        if obs.obstructed {
            return Ok(Verdict {
                status: Status::NotUnivCh0Trivial,
                reasons,
            });
        }
        return Ok(Verdict {
            status: Status::Unknown,
            reasons,
        });
    }

    // (4) constructive criteria on the definite standard form
    let p = match fib.standard_data() {
        Some((a, b, p)) if *a == -Rat::one() && *b == -Rat::one() => p.clone(),
        _ => {
            reasons.push(Evidence::new(
                "form",
                "type (I) but not the definite standard form; no criterion applies",
            ));
            return Ok(Verdict {
                status: Status::Unknown,
                reasons,
            });
        }
    };
    let violations = situation_check(&p);
    if !violations.is_empty() {
        reasons.push(
            Evidence::new("situation", "hypotheses on p violated")
                .with_data(serde_json::json!({ "violations": violations })),
        );
        return Ok(Verdict {
            status: Status::Unknown,
            reasons,
        });
    }

    let mut triviality = false;
    if let Some(cert) = criterion_a(&p)? {
        reasons.push(
            Evidence::new("criterion-a", "pass: explicit three-square decomposition").with_data(
                serde_json::json!({
                    "r_squares": cert.square_count(),
                    "verified": true,
                    "u_plus_v": "constructible; run `certify` for the four-square witness",
                }),
            ),
        );
        triviality = true;
    }
    if matches!(criterion_b(&p), CriterionB::Pass) {
        reasons.push(Evidence::new(
            "criterion-b",
            "pass: even polynomial with nonnegative coefficients",
        ));
        triviality = true;
    }
    match positivity_rtv(&p)? {
        Positivity::PatternCertified => {
            reasons.push(Evidence::new(
                "positivity",
                "pass: residual function certified nonnegative on the plane",
            ));
            triviality = true;
        }
        Positivity::Counterexample { u, v, value } => {
            reasons.push(
                Evidence::new("positivity", "fail: residual function negative somewhere")
                    .with_data(serde_json::json!({
                        "u": fmt_rat(&u), "v": fmt_rat(&v), "value": fmt_rat(&value),
                    })),
            );
        }
        Positivity::Unknown => {}
    }
    if p.degree() == Some(2) {
        let cm = cm_criterion(&p)?;
        if cm.parity_pass {
            reasons.push(
                Evidence::new("cm-parity", "pass: odd-trace complex multiplication")
                    .with_data(serde_json::to_value(&cm).expect("serializable")),
            );
            triviality = true;
        } else {
            reasons.push(
                Evidence::new("cm-parity", "fail: no odd-trace rational CM")
                    .with_data(serde_json::to_value(&cm).expect("serializable")),
            );
        }
    }

    if triviality {
        return Ok(Verdict {
            status: Status::UnivCh0Trivial,
            reasons,
        });
    }

    // (5) open case: attach the endomorphism-ring context
    let f = &UniPoly::var() * &p;
    let zarhin = if f.degree_or0() >= 5 {
        match zarhin_sn_certificate(&f, budget)? {
            SnCertificate::CertifiedSn { .. } => {
                "full symmetric Galois group: generic endomorphisms".to_string()
            }
            SnCertificate::NotSn { .. } => "Galois group inside the alternating group".to_string(),
            SnCertificate::Inconclusive { reason } => format!("inconclusive: {reason}"),
        }
    } else {
        "not applicable below degree 5".to_string()
    };
    reasons.push(Evidence::new("galois-context", zarhin));
    Ok(Verdict {
        status: Status::Unknown,
        reasons,
    })
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Re-derivation helper for the CM table: class number of an imaginary
/// quadratic order by counting primitive reduced binary quadratic forms
/// (a, b, c) of discriminant D.
pub fn form_class_number(d: i64) -> crate::Result<usize> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::Precondition(
            "discriminant must be negative and 0 or 1 mod 4".into(),
        ));
    }
    let mut count = 0usize;
    let bound = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=bound {
        for b in -a..=a {
            let num = (b as i128) * (b as i128) - d as i128;
            if num % (4 * a as i128) != 0 {
                continue;
            }
            let c = num / (4 * a as i128);
            if c < a as i128 {
                continue;
            }
            // primitive: gcd(a, b, c) = 1
            let g = gcd_i128(gcd_i128(a as i128, b as i128), c);
            if g != 1 {
                continue;
            }
            // reduced: |b| <= a <= c, and b >= 0 when |b| = a or a = c
            if (b.abs() == a || c == a as i128) && b < 0 {
                continue;
            }
            count += 1;
        }
    }
    Ok(count)
}
