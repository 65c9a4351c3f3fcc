//! Sum-of-squares certificates with exact verification.
//!
//! A certificate asserts `target = sum_i weight_i * entry_i^2` in a declared
//! ring, with positive rational weights. The entries live in the fraction
//! field over the variables x, y, z, w, u, v; coefficients are rationals
//! optionally extended by at most two formal square roots of positive
//! rationals (written S and T below), so the three-square decomposition of
//! the quadratic case and the four-square certificate for u + v are stored
//! and checked exactly while certifying genuine real sums of squares.
//!
//! Rings:
//! - `Plain`: the free polynomial ring, used for bivariate identities;
//! - `QuotientW(p)`: the coordinate ring of the product of the affine bundle
//!   chart with its discriminant curve, where `z^2` rewrites to
//!   `u p(u) - x^2 - y^2` and `w^2` to `v p(-v)`. Both relations solve for a
//!   squared variable, so reduction to a normal form of degree at most one
//!   in each of z and w is confluent.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::{
    exact_div_u_plus_v, fmt_rat, parse_rat, rat, rat_sqrt, BiPoly, Rat, UniPoly,
};
use crate::Error;

pub const VARS: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const W: usize = 3;
const U: usize = 4;
const V: usize = 5;

/// Up to two adjoined square roots of positive rationals. The coefficient
/// algebra has basis 1, S, T, ST with S^2 and T^2 the stored radicands.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Extension {
    rad: [Option<Rat>; 2],
}

impl Extension {
    pub fn none() -> Self {
        Extension::default()
    }

    pub fn radicands(&self) -> Vec<Rat> {
        self.rad.iter().flatten().cloned().collect()
    }

    /// Real values of the adjoined roots (1.0 for empty slots).
    pub fn radical_values(&self) -> [f64; 2] {
        use num_traits::ToPrimitive;
        let v = |slot: &Option<Rat>| {
            slot.as_ref()
                .and_then(|r| r.to_f64())
                .map_or(1.0, f64::sqrt)
        };
        [v(&self.rad[0]), v(&self.rad[1])]
    }

    fn rad_value(&self, slot: usize) -> Rat {
        self.rad[slot].clone().expect("occupied slot")
    }

    /// Produce a coefficient equal to the nonnegative square root of `r`,
    /// adjoining a new radical only when unavoidable.
    pub fn adjoin_sqrt(&mut self, r: &Rat) -> crate::Result<Coef> {
        if r.is_negative() {
            return Err(Error::Precondition(
                "cannot adjoin sqrt of a negative".into(),
            ));
        }
        if r.is_zero() {
            return Ok(Coef::zero());
        }
        if let Some(s) = rat_sqrt(r) {
            return Ok(Coef::rational(s));
        }
        for slot in 0..2 {
            if let Some(rad) = &self.rad[slot] {
                if let Some(s) = rat_sqrt(&(r / rad)) {
                    // sqrt(r) = s * sqrt(rad)
                    let mut c = Coef::zero();
                    c.parts[1 << slot] = s;
                    return Ok(c);
                }
            }
        }
        for slot in 0..2 {
            if self.rad[slot].is_none() {
                self.rad[slot] = Some(r.clone());
                let mut c = Coef::zero();
                c.parts[1 << slot] = Rat::one();
                return Ok(c);
            }
        }
        Err(Error::Internal(
            "more than two independent radicals requested".into(),
        ))
    }
}

/// Coefficient in the extension algebra: parts indexed by the bitmask of
/// radicals appearing in the basis monomial (1, S, T, ST).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coef {
    parts: [Rat; 4],
}

impl Coef {
    pub fn zero() -> Self {
        Coef {
            parts: [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn rational(r: Rat) -> Self {
        let mut c = Coef::zero();
        c.parts[0] = r;
        c
    }

    pub fn one() -> Self {
        Coef::rational(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    pub fn is_rational(&self) -> Option<&Rat> {
        if self.parts[1..].iter().all(|p| p.is_zero()) {
            Some(&self.parts[0])
        } else {
            None
        }
    }

    /// Numeric value with the radicals sent to the given real square roots.
    pub fn approx(&self, radicals: [f64; 2]) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for (m, part) in self.parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            let mut t = part.to_f64().unwrap_or(f64::NAN);
            if m & 1 != 0 {
                t *= radicals[0];
            }
            if m & 2 != 0 {
                t *= radicals[1];
            }
            acc += t;
        }
        acc
    }

    fn add(&self, other: &Coef) -> Coef {
        let mut out = Coef::zero();
        for i in 0..4 {
            out.parts[i] = &self.parts[i] + &other.parts[i];
        }
        out
    }

    fn neg(&self) -> Coef {
        let mut out = Coef::zero();
        for i in 0..4 {
            out.parts[i] = -self.parts[i].clone();
        }
        out
    }

    fn scale(&self, r: &Rat) -> Coef {
        let mut out = Coef::zero();
        for i in 0..4 {
            out.parts[i] = &self.parts[i] * r;
        }
        out
    }

    fn mul(&self, other: &Coef, ext: &Extension) -> Coef {
        let mut out = Coef::zero();
        for m1 in 0..4usize {
            if self.parts[m1].is_zero() {
                continue;
            }
            for m2 in 0..4usize {
                if other.parts[m2].is_zero() {
                    continue;
                }
                let mut c = &self.parts[m1] * &other.parts[m2];
                let common = m1 & m2;
                if common & 1 != 0 {
                    c *= ext.rad_value(0);
                }
                if common & 2 != 0 {
                    c *= ext.rad_value(1);
                }
                let m = m1 ^ m2;
                out.parts[m] = &out.parts[m] + &c;
            }
        }
        out
    }

    #[allow(clippy::needless_range_loop)]
    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "S", "T", "S*T"];
        let mut first = true;
        for m in 0..4 {
            if self.parts[m].is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m == 0 {
                write!(f, "{}", fmt_rat(&self.parts[m]))?;
            } else if self.parts[m].is_one() {
                write!(f, "{}", names[m])?;
            } else {
                write!(f, "{}*{}", fmt_rat(&self.parts[m]), names[m])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

type Mono = [u16; 6];

/// Sparse multivariate polynomial in x, y, z, w, u, v over the extension
/// algebra.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Coef>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(c: Coef) -> Self {
        let mut t = MPoly::zero();
        t.add_term([0; 6], c);
        t
    }

    pub fn rational(r: Rat) -> Self {
        MPoly::constant(Coef::rational(r))
    }

    pub fn one() -> Self {
        MPoly::rational(Rat::one())
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0u16; 6];
        m[i] = 1;
        let mut t = MPoly::zero();
        t.add_term(m, Coef::one());
        t
    }

    pub fn add_term(&mut self, m: Mono, c: Coef) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Coef::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn mul(&self, other: &MPoly, ext: &Extension) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = [0u16; 6];
                for i in 0..6 {
                    m[i] = m1[i] + m2[i];
                }
                out.add_term(m, c1.mul(c2, ext));
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.scale(r));
        }
        out
    }

    pub fn square(&self, ext: &Extension) -> MPoly {
        self.mul(self, ext)
    }

    /// Embed a univariate polynomial in the variable with index `var`.
    pub fn from_unipoly(p: &UniPoly, var: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut m = [0u16; 6];
            m[var] = k as u16;
            out.add_term(m, Coef::rational(c.clone()));
        }
        out
    }

    /// Embed a bivariate polynomial in (u, v).
    pub fn from_bipoly(p: &BiPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (&(i, j), c) in p.terms() {
            let mut m = [0u16; 6];
            m[U] = i as u16;
            m[V] = j as u16;
            out.add_term(m, Coef::rational(c.clone()));
        }
        out
    }

    fn max_exp(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    pub fn terms_iter(&self) -> impl Iterator<Item = (&[u16; 6], &Coef)> {
        self.terms.iter()
    }

    /// Numeric evaluation at a real point, radicals sent to real roots.
    pub fn approx(&self, point: [f64; 6], radicals: [f64; 2]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.approx(radicals);
            for i in 0..6 {
                t *= point[i].powi(m[i] as i32);
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for i in 0..6 {
                match m[i] {
                    0 => {}
                    1 => write!(f, "*{}", VARS[i])?,
                    e => write!(f, "*{}^{}", VARS[i], e)?,
                }
            }
        }
        Ok(())
    }
}

/// The ring a certificate is verified in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// Free polynomial ring (no relations).
    Plain,
    /// Coordinate ring with `z^2 = u p(u) - x^2 - y^2`, `w^2 = v p(-v)`.
    QuotientW { p: UniPoly },
}

impl RingKind {
    /// Rewrite to the normal form: degree at most 1 in each of z and w.
    pub fn reduce(&self, poly: &MPoly, ext: &Extension) -> MPoly {
        let p = match self {
            RingKind::Plain => return poly.clone(),
            RingKind::QuotientW { p } => p,
        };
        // z^2 -> u p(u) - x^2 - y^2
        let z_rule = {
            let upu = MPoly::from_unipoly(&(&UniPoly::var() * p), U);
            let x2 = MPoly::var(X).square(ext);
            let y2 = MPoly::var(Y).square(ext);
            upu.sub(&x2).sub(&y2)
        };
        // w^2 -> v p(-v)
        let w_rule = MPoly::from_unipoly(&(&UniPoly::var() * &p.substitute_neg()), V);
        let mut cur = poly.clone();
        loop {
            if cur.max_exp(Z) < 2 && cur.max_exp(W) < 2 {
                return cur;
            }
            let mut next = MPoly::zero();
            for (m, c) in &cur.terms {
                if m[Z] >= 2 {
                    let mut m2 = *m;
                    m2[Z] -= 2;
                    let mut t = MPoly::zero();
                    t.add_term(m2, c.clone());
                    next = next.add(&t.mul(&z_rule, ext));
                } else if m[W] >= 2 {
                    let mut m2 = *m;
                    m2[W] -= 2;
                    let mut t = MPoly::zero();
                    t.add_term(m2, c.clone());
                    next = next.add(&t.mul(&w_rule, ext));
                } else {
                    next.add_term(*m, c.clone());
                }
            }
            cur = next;
        }
    }
}

/// Element of the fraction field: num / den.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: MPoly,
    pub den: MPoly,
}

impl Frac {
    pub fn from_poly(num: MPoly) -> Frac {
        Frac {
            num,
            den: MPoly::one(),
        }
    }

    pub fn rational(r: Rat) -> Frac {
        Frac::from_poly(MPoly::rational(r))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn mul(&self, other: &Frac, ext: &Extension) -> Frac {
        Frac {
            num: self.num.mul(&other.num, ext),
            den: self.den.mul(&other.den, ext),
        }
    }

    fn div(&self, other: &Frac, ext: &Extension) -> Frac {
        Frac {
            num: self.num.mul(&other.den, ext),
            den: self.den.mul(&other.num, ext),
        }
    }

    pub fn approx(&self, point: [f64; 6], radicals: [f64; 2]) -> f64 {
        self.num.approx(point, radicals) / self.den.approx(point, radicals)
    }
}

/// A weighted sum-of-squares certificate.
#[derive(Clone, Debug)]
pub struct SOSCertificate {
    pub ring: RingKind,
    pub ext: Extension,
    pub target: Frac,
    /// (weight, entry) pairs: the claim is `target = sum w_i entry_i^2`.
    /// Weights are positive rationals, so over the reals each weighted
    /// square is a single square.
    pub entries: Vec<(Rat, Frac)>,
}

impl SOSCertificate {
    /// Number of squares the certificate uses.
    pub fn square_count(&self) -> usize {
        self.entries.len()
    }

    /// Exact verification: clears denominators, reduces to the ring normal
    /// form and compares. Errors when a denominator vanishes in the ring;
    /// returns false on any nonpositive weight or failed identity.
    pub fn verify(&self) -> crate::Result<bool> {
        let ext = &self.ext;
        for (w, _) in &self.entries {
            if !w.is_positive() {
                return Ok(false);
            }
        }
        for f in self.entries.iter().map(|(_, e)| e).chain([&self.target]) {
            if self.ring.reduce(&f.den, ext).is_zero() {
                return Err(Error::DivisionByZeroDenominator);
            }
        }
        // sum w_i (n_i/d_i)^2 - tn/td == 0, cleared over td * prod d_i^2;
        // a shared denominator (the common case) clears over td * d^2 only
        let shared_den = self
            .entries
            .split_first()
            .filter(|(first, rest)| rest.iter().all(|(_, e)| e.den == first.1.den))
            .map(|(first, _)| first.1.den.clone());
        let (lhs, common) = match shared_den {
            Some(d) => {
                let mut lhs = MPoly::zero();
                for (w, e) in &self.entries {
                    lhs = lhs.add(&e.num.square(ext).scale(w));
                }
                (lhs, d.square(ext))
            }
            None => {
                let mut lhs = MPoly::zero();
                let mut common = MPoly::one();
                for (_, e) in &self.entries {
                    common = common.mul(&e.den.square(ext), ext);
                }
                for (i, (w, e)) in self.entries.iter().enumerate() {
                    let mut term = e.num.square(ext).scale(w);
                    for (j, (_, e2)) in self.entries.iter().enumerate() {
                        if i != j {
                            term = term.mul(&e2.den.square(ext), ext);
                        }
                    }
                    lhs = lhs.add(&term);
                }
                (lhs, common)
            }
        };
        // lhs / common = target.num / target.den
        let left = lhs.mul(&self.target.den, ext);
        let right = self.target.num.mul(&common, ext);
        let diff = self.ring.reduce(&left.sub(&right), ext);
        Ok(diff.is_zero())
    }
}

/// Quaternion with coefficients in the given fraction field; the reduced
/// norm is the sum of the four coordinate squares.
fn quaternion_mul(a: &[Frac; 4], b: &[Frac; 4], ext: &Extension) -> [Frac; 4] {
    let m = |i: usize, j: usize| a[i].mul(&b[j], ext);
    let add = |x: Frac, y: Frac, ext: &Extension| -> Frac {
        // x + y over a common denominator
        let num = x.num.mul(&y.den, ext).add(&y.num.mul(&x.den, ext));
        let den = x.den.mul(&y.den, ext);
        Frac { num, den }
    };
    let sub = |x: Frac, y: Frac, ext: &Extension| -> Frac {
        let num = x.num.mul(&y.den, ext).sub(&y.num.mul(&x.den, ext));
        let den = x.den.mul(&y.den, ext);
        Frac { num, den }
    };
    let c0 = sub(sub(m(0, 0), m(1, 1), ext), add(m(2, 2), m(3, 3), ext), ext);
    let c1 = add(add(m(0, 1), m(1, 0), ext), sub(m(2, 3), m(3, 2), ext), ext);
    let c2 = add(sub(m(0, 2), m(1, 3), ext), add(m(2, 0), m(3, 1), ext), ext);
    let c3 = add(add(m(0, 3), m(1, 2), ext), sub(m(3, 0), m(2, 1), ext), ext);
    [c0, c1, c2, c3]
}

fn conj(a: &[Frac; 4]) -> [Frac; 4] {
    [
        a[0].clone(),
        Frac {
            num: a[1].num.neg(),
            den: a[1].den.clone(),
        },
        Frac {
            num: a[2].num.neg(),
            den: a[2].den.clone(),
        },
        Frac {
            num: a[3].num.neg(),
            den: a[3].den.clone(),
        },
    ]
}

fn entries_to_quaternion(cert: &SOSCertificate) -> crate::Result<[Frac; 4]> {
    if cert.entries.len() > 4 {
        return Err(Error::Precondition(
            "composition needs at most 4 squares".into(),
        ));
    }
    if cert.entries.iter().any(|(w, _)| !w.is_one()) {
        return Err(Error::Precondition(
            "composition needs plain (weight-1) squares".into(),
        ));
    }
    let mut q = [
        Frac::rational(Rat::zero()),
        Frac::rational(Rat::zero()),
        Frac::rational(Rat::zero()),
        Frac::rational(Rat::zero()),
    ];
    for (i, (_, e)) in cert.entries.iter().enumerate() {
        q[i] = e.clone();
    }
    Ok(q)
}

fn compatible(a: &SOSCertificate, b: &SOSCertificate) -> crate::Result<()> {
    if a.ring != b.ring {
        return Err(Error::Precondition(
            "certificates live in different rings".into(),
        ));
    }
    if a.ext != b.ext {
        return Err(Error::Precondition(
            "certificates use different coefficient extensions".into(),
        ));
    }
    Ok(())
}

/// Compose two certificates for s and t into one for s*t by the four-square
/// multiplication identity.
pub fn euler_compose(a: &SOSCertificate, b: &SOSCertificate) -> crate::Result<SOSCertificate> {
    compatible(a, b)?;
    let ext = a.ext.clone();
    let qa = entries_to_quaternion(a)?;
    let qb = entries_to_quaternion(b)?;
    let prod = quaternion_mul(&qa, &qb, &ext);
    let entries = prod
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| (Rat::one(), f))
        .collect();
    Ok(SOSCertificate {
        ring: a.ring.clone(),
        ext,
        target: a.target.mul(&b.target, &a.ext),
        entries,
    })
}

/// Divide a certificate for s by a certificate for t, producing one for s/t
/// via s/t = s*conj(t)/Nrd(t).
pub fn divide_cert(s: &SOSCertificate, t: &SOSCertificate) -> crate::Result<SOSCertificate> {
    compatible(s, t)?;
    let ext = s.ext.clone();
    if t.ring.reduce(&t.target.num, &ext).is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let qs = entries_to_quaternion(s)?;
    let qt = entries_to_quaternion(t)?;
    let prod = quaternion_mul(&qs, &conj(&qt), &ext);
    let entries: Vec<(Rat, Frac)> = prod
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| (Rat::one(), f.div(&t.target, &ext)))
        .collect();
    Ok(SOSCertificate {
        ring: s.ring.clone(),
        ext,
        target: s.target.div(&t.target, &s.ext),
        entries,
    })
}

/// Decompose a nonnegative rational into at most four rational squares
/// (classical descent on the integer n*d of q = n/d).
pub fn lagrange_four_squares(q: &Rat) -> crate::Result<Vec<Rat>> {
    use num_bigint::BigInt;
    if q.is_negative() {
        return Err(Error::Precondition("need a nonnegative rational".into()));
    }
    if q.is_zero() {
        return Ok(vec![]);
    }
    let d = q.denom().clone();
    let m = q.numer() * &d;

    fn two_squares(m: &BigInt) -> Option<(BigInt, BigInt)> {
        let mut x = m.sqrt();
        loop {
            let r = m - &x * &x;
            if r.is_negative() {
                return None;
            }
            if let Some(y) = crate::exactmath::perfect_square(&r) {
                return Some((x, y));
            }
            if &x * &x * 2u32 < *m {
                return None;
            }
            x -= 1u32;
        }
    }

    fn three_squares(m: &BigInt) -> Option<(BigInt, BigInt, BigInt)> {
        if m.is_zero() {
            return Some((BigInt::zero(), BigInt::zero(), BigInt::zero()));
        }
        let mut x = m.sqrt();
        loop {
            if x.is_negative() {
                return None;
            }
            let r = m - &x * &x;
            if let Some((y, z)) = two_squares(&r) {
                return Some((x, y, z));
            }
            x -= 1u32;
        }
    }

    // strip powers of four so the three-square obstruction is visible
    let mut m4 = m.clone();
    let mut pow2 = BigInt::one();
    while (&m4 % 4u32).is_zero() {
        m4 /= 4u32;
        pow2 *= 2u32;
    }
    let needs_four = (&m4 % 8u32) == BigInt::from(7u32);
    let (a, b, c, e) = if needs_four {
        // peel one square off so the remainder admits three squares
        let mut x = m4.sqrt();
        loop {
            let r = &m4 - &x * &x;
            if let Some((a, b, c)) = three_squares(&r) {
                break (a, b, c, x);
            }
            x -= 1u32;
        }
    } else {
        let (a, b, c) = three_squares(&m4).ok_or_else(|| {
            Error::Internal("three-square decomposition unexpectedly failed".into())
        })?;
        (a, b, c, BigInt::zero())
    };
    let mut out: Vec<Rat> = [a, b, c, e]
        .into_iter()
        .filter(|t| !t.is_zero())
        .map(|t| Rat::new(t * &pow2, d.clone()))
        .collect();
    out.sort();
    out.reverse();
    Ok(out)
}

/// A plain-square certificate for a nonnegative rational constant.
pub fn rational_square_cert(q: &Rat, ring: RingKind) -> crate::Result<SOSCertificate> {
    let squares = lagrange_four_squares(q)?;
    Ok(SOSCertificate {
        ring,
        ext: Extension::none(),
        target: Frac::rational(q.clone()),
        entries: squares
            .into_iter()
            .map(|s| (Rat::one(), Frac::rational(s)))
            .collect(),
    })
}

/// The quadratic-case data: for monic separable positive `p = u^2 + a u + b`
/// with `b >= a^2/3`, the residual function r(u, v) decomposes as
/// `(u + (a-v)/2)^2 + 3/4 (v - a/3)^2 + (b - a^2/3)`.
pub struct QuadraticSosData {
    pub a: Rat,
    pub b: Rat,
    /// u + (a - v)/2
    pub first: MPoly,
    /// v - a/3
    pub second: MPoly,
    /// b - a^2/3 >= 0
    pub constant: Rat,
}

/// Build the explicit three-square decomposition of r for a quadratic p, or
/// None when p is not monic quadratic separable positive with b >= a^2/3.
pub fn quadratic_sos_data(p: &UniPoly) -> Option<QuadraticSosData> {
    if p.degree() != Some(2) || !p.is_monic() {
        return None;
    }
    let a = p.coeff(1);
    let b = p.coeff(0);
    // separable positive: b > a^2/4
    if (&a * &a) >= (b.clone() * rat(4, 1)) {
        return None;
    }
    let constant = &b - &(&a * &a) / rat(3, 1);
    if constant.is_negative() {
        return None;
    }
    let mut first = MPoly::var(U);
    first = first.add(&MPoly::rational(&a / rat(2, 1)));
    first = first.sub(&MPoly::var(V).scale(&rat(1, 2)));
    let mut second = MPoly::var(V);
    second = second.sub(&MPoly::rational(&a / rat(3, 1)));
    Some(QuadraticSosData {
        a,
        b,
        first,
        second,
        constant,
    })
}

/// The weighted three-square certificate for the residual function r(u, v)
/// of a quadratic p: `r = 1*(u+(a-v)/2)^2 + (3/4)*(v-a/3)^2 + constant`,
/// with the constant emitted as a rational square when it is one.
pub fn criterion_a_certificate(p: &UniPoly) -> crate::Result<Option<SOSCertificate>> {
    let data = match quadratic_sos_data(p) {
        Some(d) => d,
        None => return Ok(None),
    };
    let r = exact_div_u_plus_v(p)?;
    let mut entries = vec![
        (Rat::one(), Frac::from_poly(data.first.clone())),
        (rat(3, 4), Frac::from_poly(data.second.clone())),
    ];
    if !data.constant.is_zero() {
        if let Some(s) = rat_sqrt(&data.constant) {
            entries.push((Rat::one(), Frac::rational(s)));
        } else {
            entries.push((data.constant.clone(), Frac::rational(Rat::one())));
        }
    }
    let cert = SOSCertificate {
        ring: RingKind::Plain,
        ext: Extension::none(),
        target: Frac::from_poly(MPoly::from_bipoly(&r)),
        entries,
    };
    if !cert.verify()? {
        return Err(Error::Internal(
            "quadratic sum-of-squares expansion failed to verify".into(),
        ));
    }
    Ok(Some(cert))
}

/// Try to write a positive rational as a sum of at most two rational
/// squares by a bounded search on n*d.
fn two_rational_squares(q: &Rat) -> Option<(Rat, Rat)> {
    use num_bigint::BigInt;
    let d = q.denom().clone();
    let m = q.numer() * &d;
    if m > BigInt::from(5_000_000u64) {
        return None;
    }
    let mut x = m.sqrt();
    while !x.is_negative() {
        let r = &m - &x * &x;
        if let Some(y) = crate::exactmath::perfect_square(&r) {
            return Some((Rat::new(x, d.clone()), Rat::new(y, d)));
        }
        if (&x * &x) * 2u32 < m {
            return None;
        }
        x -= 1u32;
    }
    None
}

/// The four-square certificate for u + v in the coordinate ring of W.
///
/// The norm chain: with N = x^2+y^2+z^2+w^2 and R a quaternion whose reduced
/// norm is r(u, v), the coordinates of Q * conj(R) divided by r give
/// `u + v = N r / r^2` as exactly four squares. The quadratic decomposition
/// of r needs sqrt(3) and sqrt of the constant term, which are carried as
/// formal radicals verified by exact rewriting; over the reals they are
/// genuine positive square roots, so the certificate exhibits u + v as a sum
/// of four squares in the function field.
///
/// ```
/// use qfib::exactmath::UniPoly;
/// use qfib::soscert::certify_u_plus_v;
///
/// let cert = certify_u_plus_v(&UniPoly::from_i64s(&[1, 0, 1]))?;
/// assert!(cert.square_count() <= 4);
/// assert!(cert.verify()?);
/// # Ok::<(), qfib::Error>(())
/// ```
pub fn certify_u_plus_v(p: &UniPoly) -> crate::Result<SOSCertificate> {
    let data = quadratic_sos_data(p).ok_or_else(|| {
        Error::Precondition(
            "certificate needs a monic separable positive quadratic with b >= a^2/3".into(),
        )
    })?;
    let ring = RingKind::QuotientW { p: p.clone() };
    let mut ext = Extension::none();

    // R = (first, sqrt(3)/2 * second, k1, k2) with k1^2 + k2^2 = constant
    let sqrt3 = ext.adjoin_sqrt(&rat(3, 1))?;
    let half_sqrt3 = sqrt3.scale(&rat(1, 2));
    let second_scaled = {
        let mut t = MPoly::zero();
        for (m, c) in &data.second.terms {
            t.add_term(*m, c.mul(&half_sqrt3, &ext));
        }
        t
    };
    let (k1, k2) = if data.constant.is_zero() {
        (Coef::zero(), Coef::zero())
    } else if let Some((l1, l2)) = two_rational_squares(&data.constant) {
        (Coef::rational(l1), Coef::rational(l2))
    } else {
        (ext.adjoin_sqrt(&data.constant)?, Coef::zero())
    };

    let r_quat: [Frac; 4] = [
        Frac::from_poly(data.first.clone()),
        Frac::from_poly(second_scaled),
        Frac::from_poly(MPoly::constant(k1)),
        Frac::from_poly(MPoly::constant(k2)),
    ];
    let q_quat: [Frac; 4] = [
        Frac::from_poly(MPoly::var(X)),
        Frac::from_poly(MPoly::var(Y)),
        Frac::from_poly(MPoly::var(Z)),
        Frac::from_poly(MPoly::var(W)),
    ];
    let r_poly = MPoly::from_bipoly(&exact_div_u_plus_v(p)?);
    let r_frac = Frac::from_poly(r_poly);
    let prod = quaternion_mul(&q_quat, &conj(&r_quat), &ext);
    let entries: Vec<(Rat, Frac)> = prod
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| (Rat::one(), f.div(&r_frac, &ext)))
        .collect();
    let target = Frac::from_poly(MPoly::var(U).add(&MPoly::var(V)));
    let cert = SOSCertificate {
        ring,
        ext,
        target,
        entries,
    };
    if !cert.verify()? {
        return Err(Error::Internal(
            "u+v certificate failed its own verification".into(),
        ));
    }
    Ok(cert)
}

// ---------------------------------------------------------------------
// JSON serialization of certificates (exact strings, machine-checkable).
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermDto {
    m: [u16; 6],
    c: Vec<(u8, String)>,
}

#[derive(Serialize, Deserialize)]
struct FracDto {
    num: Vec<TermDto>,
    den: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct EntryDto {
    weight: String,
    #[serde(flatten)]
    frac: FracDto,
}

/// Serializable form of a certificate.
#[derive(Serialize, Deserialize)]
pub struct CertificateDto {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radicands: Vec<String>,
    target: FracDto,
    entries: Vec<EntryDto>,
}

fn poly_to_dto(p: &MPoly) -> Vec<TermDto> {
    p.terms
        .iter()
        .map(|(m, c)| TermDto {
            m: *m,
            c: (0..4u8)
                .filter(|&i| !c.parts[i as usize].is_zero())
                .map(|i| (i, fmt_rat(&c.parts[i as usize])))
                .collect(),
        })
        .collect()
}

fn poly_from_dto(terms: &[TermDto]) -> crate::Result<MPoly> {
    let mut out = MPoly::zero();
    for t in terms {
        let mut c = Coef::zero();
        for (mask, s) in &t.c {
            if *mask > 3 {
                return Err(Error::InvalidInput("bad radical mask".into()));
            }
            c.parts[*mask as usize] = parse_rat(s)?;
        }
        out.add_term(t.m, c);
    }
    Ok(out)
}

fn frac_to_dto(f: &Frac) -> FracDto {
    FracDto {
        num: poly_to_dto(&f.num),
        den: poly_to_dto(&f.den),
    }
}

fn frac_from_dto(f: &FracDto) -> crate::Result<Frac> {
    Ok(Frac {
        num: poly_from_dto(&f.num)?,
        den: poly_from_dto(&f.den)?,
    })
}

impl SOSCertificate {
    pub fn to_dto(&self) -> CertificateDto {
        let (ring, p) = match &self.ring {
            RingKind::Plain => ("plain".to_string(), None),
            RingKind::QuotientW { p } => ("w".to_string(), Some(p.to_coeff_string())),
        };
        CertificateDto {
            ring,
            p,
            radicands: self.ext.radicands().iter().map(fmt_rat).collect(),
            target: frac_to_dto(&self.target),
            entries: self
                .entries
                .iter()
                .map(|(w, e)| EntryDto {
                    weight: fmt_rat(w),
                    frac: frac_to_dto(e),
                })
                .collect(),
        }
    }

    pub fn from_dto(dto: &CertificateDto) -> crate::Result<SOSCertificate> {
        let ring = match dto.ring.as_str() {
            "plain" => RingKind::Plain,
            "w" => {
                let p = dto
                    .p
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("ring \"w\" needs p".into()))?;
                RingKind::QuotientW {
                    p: UniPoly::parse(p)?,
                }
            }
            other => return Err(Error::InvalidInput(format!("unknown ring `{other}`"))),
        };
        if dto.radicands.len() > 2 {
            return Err(Error::InvalidInput(
                "at most two radicands supported".into(),
            ));
        }
        let mut ext = Extension::none();
        for (i, r) in dto.radicands.iter().enumerate() {
            let v = parse_rat(r)?;
            if !v.is_positive() {
                return Err(Error::InvalidInput("radicands must be positive".into()));
            }
            ext.rad[i] = Some(v);
        }
        Ok(SOSCertificate {
            ring,
            ext,
            target: frac_from_dto(&dto.target)?,
            entries: dto
                .entries
                .iter()
                .map(|e| Ok((parse_rat(&e.weight)?, frac_from_dto(&e.frac)?)))
                .collect::<crate::Result<Vec<_>>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("serializable")
    }

    pub fn from_json(s: &str) -> crate::Result<SOSCertificate> {
        let dto: CertificateDto = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("bad certificate JSON: {e}")))?;
        SOSCertificate::from_dto(&dto)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rint;

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::from_i64s(cs)
    }

    fn plain_const_cert(target: i64, squares: &[i64]) -> SOSCertificate {
        SOSCertificate {
            ring: RingKind::Plain,
            ext: Extension::none(),
            target: Frac::rational(rint(target)),
            entries: squares
                .iter()
                .map(|&s| (Rat::one(), Frac::rational(rint(s))))
                .collect(),
        }
    }

    #[test]
    fn verify_plain_constants() {
        assert!(plain_const_cert(2, &[1, 1]).verify().unwrap());
        assert!(!plain_const_cert(2, &[1]).verify().unwrap());
        assert!(plain_const_cert(6, &[0, 2, 1, 1]).verify().unwrap());
    }

    #[test]
    fn criterion_a_certificates_expand_to_r() {
        // p = u^2 + 1: entries (u - v/2), (3/4)(v)^2, 1
        let c = criterion_a_certificate(&p(&[1, 0, 1])).unwrap().unwrap();
        assert_eq!(c.square_count(), 3);
        assert!(c.verify().unwrap());
        // boundary: p = u^2 - 3u + 3 has constant 0, two squares
        let c = criterion_a_certificate(&p(&[3, -3, 1])).unwrap().unwrap();
        assert_eq!(c.square_count(), 2);
        assert!(c.verify().unwrap());
        // p = u^2 + 4u + 5: positive but 5 < 16/3
        assert!(criterion_a_certificate(&p(&[5, 4, 1])).unwrap().is_none());
    }

    #[test]
    fn quotient_ring_identity_for_coordinates() {
        // entries (x,y,z,w), target u p(u) + v p(-v) in QuotientW(p)
        let pp = p(&[1, 0, 1]);
        let target = {
            let upu = MPoly::from_unipoly(&(&UniPoly::var() * &pp), 4);
            let vpv = MPoly::from_unipoly(&(&UniPoly::var() * &pp.substitute_neg()), 5);
            Frac::from_poly(upu.add(&vpv))
        };
        let cert = SOSCertificate {
            ring: RingKind::QuotientW { p: pp },
            ext: Extension::none(),
            target,
            entries: (0..4)
                .map(|i| (Rat::one(), Frac::from_poly(MPoly::var(i))))
                .collect(),
        };
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn euler_composition_example() {
        let a = plain_const_cert(2, &[1, 1]);
        let b = plain_const_cert(3, &[1, 1, 1]);
        let c = euler_compose(&a, &b).unwrap();
        assert!(c.verify().unwrap());
        // (1,1,0,0)*(1,1,1,0) = (0,2,1,1)
        let coords: Vec<Rat> = c
            .entries
            .iter()
            .map(|(_, e)| {
                let t = e.num.terms.values().next().unwrap();
                t.is_rational().unwrap().clone()
            })
            .collect();
        assert_eq!(coords, vec![rint(2), rint(1), rint(1)]);
    }

    #[test]
    fn euler_identity_element() {
        let s = plain_const_cert(5, &[2, 1]);
        let one = plain_const_cert(1, &[1]);
        let c = euler_compose(&s, &one).unwrap();
        assert!(c.verify().unwrap());
        assert_eq!(c.square_count(), 2);
    }

    #[test]
    fn divide_examples() {
        let six = plain_const_cert(6, &[2, 1, 1]);
        let three = plain_const_cert(3, &[1, 1, 1]);
        let two = divide_cert(&six, &three).unwrap();
        assert!(two.verify().unwrap());
        // s = t gives a certificate for 1
        let c = divide_cert(&three, &three).unwrap();
        assert!(c.verify().unwrap());
        // division by zero certificate
        let zero = plain_const_cert(0, &[]);
        assert!(matches!(divide_cert(&six, &zero), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn u_plus_v_certificates() {
        // constants 1 (a square), 0, 2/3 and 7 (both needing a radical)
        for cs in [[1i64, 0, 1], [3, -3, 1], [1, 1, 1], [7, 0, 1]] {
            let cert = certify_u_plus_v(&p(&cs)).unwrap();
            assert!(cert.square_count() <= 4, "p = {:?}", cs);
            assert!(cert.verify().unwrap());
        }
        // 5 = 1 + 4 stays within one radical
        let cert = certify_u_plus_v(&p(&[5, 0, 1])).unwrap();
        assert_eq!(cert.ext.radicands().len(), 1);
        assert!(cert.verify().unwrap());
        // inapplicable p
        assert!(certify_u_plus_v(&p(&[5, 4, 1])).is_err());
    }

    #[test]
    fn symbolic_two_square_composition() {
        // certificates for p(u) = u^2+1 and p(v) = v^2+1 compose to a
        // four-square certificate for the product
        let ext = Extension::none();
        let mk = |var: usize| SOSCertificate {
            ring: RingKind::Plain,
            ext: Extension::none(),
            target: Frac::from_poly(
                MPoly::var(var)
                    .square(&Extension::none())
                    .add(&MPoly::one()),
            ),
            entries: vec![
                (Rat::one(), Frac::from_poly(MPoly::var(var))),
                (Rat::one(), Frac::from_poly(MPoly::one())),
            ],
        };
        let a = mk(4); // u
        let b = mk(5); // v
        let c = euler_compose(&a, &b).unwrap();
        assert!(c.verify().unwrap());
        assert!(c.square_count() <= 4);
        let _ = ext;
    }

    #[test]
    fn lagrange_decompositions() {
        for q in [rint(7), rint(12), rat(2, 3), rint(1), rint(15), rint(112)] {
            let sq = lagrange_four_squares(&q).unwrap();
            assert!(sq.len() <= 4);
            let sum: Rat = sq.iter().map(|s| s * s).sum();
            assert_eq!(sum, q);
        }
        assert!(lagrange_four_squares(&rint(0)).unwrap().is_empty());
        assert!(lagrange_four_squares(&rint(-1)).is_err());
    }

    #[test]
    fn weighted_entries_in_the_quotient_ring() {
        // 4*(x/2)^2 + y^2 + z^2 + w^2 = u p(u) + v p(-v) in QuotientW(p)
        let pp = p(&[1, 0, 1]);
        let target = {
            let upu = MPoly::from_unipoly(&(&UniPoly::var() * &pp), 4);
            let vpv = MPoly::from_unipoly(&(&UniPoly::var() * &pp.substitute_neg()), 5);
            Frac::from_poly(upu.add(&vpv))
        };
        let half_x = Frac::from_poly(MPoly::var(0).scale(&rat(1, 2)));
        let cert = SOSCertificate {
            ring: RingKind::QuotientW { p: pp },
            ext: Extension::none(),
            target,
            entries: vec![
                (rint(4), half_x),
                (Rat::one(), Frac::from_poly(MPoly::var(1))),
                (Rat::one(), Frac::from_poly(MPoly::var(2))),
                (Rat::one(), Frac::from_poly(MPoly::var(3))),
            ],
        };
        assert!(cert.verify().unwrap());
        // nonpositive weights are rejected by verification
        let mut bad = cert.clone();
        bad.entries[0].0 = rint(-4);
        assert!(!bad.verify().unwrap());
    }

    #[test]
    fn normal_form_confluence() {
        // reduce z-then-w equals w-then-z: reduction is deterministic here,
        // so check that two assembly orders of the same element agree
        let pp = p(&[2, 1, 1]);
        let ring = RingKind::QuotientW { p: pp };
        let ext = Extension::none();
        let z2 = MPoly::var(2).square(&ext);
        let w2 = MPoly::var(3).square(&ext);
        let a = ring.reduce(&z2.mul(&w2, &ext), &ext);
        let b = ring.reduce(&w2.mul(&z2, &ext), &ext);
        assert_eq!(a, b);
        let nested = z2.mul(&z2, &ext).mul(&w2, &ext);
        let c1 = ring.reduce(&nested, &ext);
        let c2 = ring.reduce(&ring.reduce(&z2.mul(&z2, &ext), &ext).mul(&w2, &ext), &ext);
        assert_eq!(c1, c2);
    }

    #[test]
    fn certificates_hold_numerically_at_real_points() {
        // pick a real point of W over (u0, v0) and check the emitted
        // identities as plain floating-point sums of squares
        let pp = p(&[1, 1, 1]); // u^2+u+1, constant term 2/3 in the r-cert
        let (u0, v0) = (0.7f64, 0.3f64);
        let pf = |x: f64| x * x + x + 1.0;
        let (x0, y0) = (0.1f64, 0.2f64);
        let z0 = (u0 * pf(u0) - x0 * x0 - y0 * y0).sqrt();
        let w0 = (v0 * pf(-v0)).sqrt();
        assert!(z0.is_finite() && w0.is_finite());
        let point = [x0, y0, z0, w0, u0, v0];

        let uv = certify_u_plus_v(&pp).unwrap();
        let rad = uv.ext.radical_values();
        let total: f64 = uv
            .entries
            .iter()
            .map(|(w, e)| {
                let v = e.approx(point, rad);
                w_to_f64(w) * v * v
            })
            .sum();
        assert!(
            (total - (u0 + v0)).abs() < 1e-9,
            "numeric sum {total} vs {}",
            u0 + v0
        );

        let rc = criterion_a_certificate(&pp).unwrap().unwrap();
        let r = exact_div_u_plus_v(&pp).unwrap();
        let r_val = {
            use num_traits::ToPrimitive;
            let mut acc = 0.0;
            for (&(i, j), c) in r.terms() {
                acc += c.to_f64().unwrap() * u0.powi(i as i32) * v0.powi(j as i32);
            }
            acc
        };
        let total: f64 = rc
            .entries
            .iter()
            .map(|(w, e)| {
                let v = e.approx(point, [1.0, 1.0]);
                w_to_f64(w) * v * v
            })
            .sum();
        assert!((total - r_val).abs() < 1e-9);
    }

    fn w_to_f64(w: &Rat) -> f64 {
        use num_traits::ToPrimitive;
        w.to_f64().unwrap()
    }

    #[test]
    fn json_round_trip() {
        let cert = certify_u_plus_v(&p(&[1, 1, 1])).unwrap();
        let json = cert.to_json();
        let back = SOSCertificate::from_json(&json).unwrap();
        assert!(back.verify().unwrap());
        assert_eq!(back.square_count(), cert.square_count());
        assert_eq!(json, back.to_json());
    }

    #[test]
    fn tampered_certificate_fails() {
        let cert = certify_u_plus_v(&p(&[1, 0, 1])).unwrap();
        let mut dto = cert.to_dto();
        dto.entries[0].weight = "2".into();
        let bad = SOSCertificate::from_dto(&dto).unwrap();
        assert!(!bad.verify().unwrap());
    }
}
