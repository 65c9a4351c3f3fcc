//! Quaternion-symbol residue calculus over R(u) and Hilbert symbols over R
//! and Q_p.
//!
//! A symbol (f, g) with f, g nonzero rational functions has, at every real
//! closed point P of the projective line, a tame residue in the square
//! classes of the residue field. At complex closed points the residue group
//! is trivial, so only real points are tracked. Exactness of the residue
//! sequence over the real projective line forces an even number of
//! nontrivial residues, and a symbol with no nontrivial residue is constant,
//! i.e. comes from the Brauer group of the reals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmath::{isolate_real_roots, rint, sign, Rat, RealAlgebraic, RootLocation, UniPoly};
use crate::Error;

/// A rational function num/den over Q in the variable u.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> crate::Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    /// Remove the common factor; normalizes the denominator to be monic.
    pub fn reduced(&self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc {
                num: UniPoly::zero(),
                den: UniPoly::one(),
            };
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.exact_div(&g).expect("gcd divides");
        let den = self.den.exact_div(&g).expect("gcd divides");
        let lc = den.lc();
        RatFunc {
            num: num.scale(&lc.recip()),
            den: den.scale(&lc.recip()),
        }
    }

    fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
        .reduced()
    }

    fn pow_signed(&self, e: i64) -> RatFunc {
        let (n, d, e) = if e >= 0 {
            (self.num.clone(), self.den.clone(), e as usize)
        } else {
            (self.den.clone(), self.num.clone(), (-e) as usize)
        };
        RatFunc {
            num: n.pow(e),
            den: d.pow(e),
        }
    }

    /// Valuation at a rational point c (order of u - c).
    fn val_at_rational(&self, c: &Rat) -> i64 {
        self.num.ord_at(c) as i64 - self.den.ord_at(c) as i64
    }

    /// Valuation at a real algebraic point (root multiplicity of the point).
    fn val_at_algebraic(&self, a: &RealAlgebraic) -> i64 {
        fn mult(p: &UniPoly, a: &RealAlgebraic) -> i64 {
            let mut m = 0i64;
            for (g, k) in p.squarefree_decomposition() {
                if crate::exactmath::sign_at(&g, a) == 0 {
                    m += k as i64;
                }
            }
            m
        }
        mult(&self.num, a) - mult(&self.den, a)
    }

    /// Valuation at infinity: deg(den) - deg(num).
    fn val_at_infinity(&self) -> i64 {
        self.den.degree_or0() as i64 - self.num.degree_or0() as i64
    }

    pub fn valuation(&self, p: &ClosedPointR) -> i64 {
        assert!(!self.is_zero(), "valuation of the zero function");
        match p {
            ClosedPointR::Rational(c) => self.val_at_rational(c),
            ClosedPointR::RealAlgebraic(a) => self.val_at_algebraic(a),
            ClosedPointR::Infinity => self.val_at_infinity(),
        }
    }

    /// Sign of a valuation-zero rational function at P. The fraction is
    /// reduced first, after which neither part vanishes at P.
    fn sign_at_point(&self, p: &ClosedPointR) -> i32 {
        let r = self.reduced();
        match p {
            ClosedPointR::Rational(c) => sign(&r.num.eval(c)) * sign(&r.den.eval(c)),
            ClosedPointR::RealAlgebraic(a) => {
                crate::exactmath::sign_at(&r.num, a) * crate::exactmath::sign_at(&r.den, a)
            }
            ClosedPointR::Infinity => {
                match r.num.degree_or0().cmp(&r.den.degree_or0()) {
                    Ordering::Less => 0,    // would mean valuation > 0
                    Ordering::Greater => 0, // valuation < 0
                    Ordering::Equal => sign(&r.num.lc()) * sign(&r.den.lc()),
                }
            }
        }
    }

    pub fn eval(&self, c: &Rat) -> Option<Rat> {
        let r = self.reduced();
        let d = r.den.eval(c);
        if d.is_zero() {
            None
        } else {
            Some(r.num.eval(c) / d)
        }
    }

    /// Parse "num|den" or just "num", both in the coefficient-list format.
    pub fn parse(s: &str) -> crate::Result<RatFunc> {
        match s.split_once('|') {
            Some((n, d)) => RatFunc::new(UniPoly::parse(n)?, UniPoly::parse(d)?),
            None => Ok(RatFunc::from_poly(UniPoly::parse(s)?)),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.lc().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// A real closed point of the projective line.
#[derive(Clone, Debug)]
pub enum ClosedPointR {
    Rational(Rat),
    RealAlgebraic(RealAlgebraic),
    Infinity,
}

impl ClosedPointR {
    pub fn cmp_point(&self, other: &ClosedPointR) -> Ordering {
        use ClosedPointR::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, _) => Ordering::Greater,
            (_, Infinity) => Ordering::Less,
            (Rational(a), Rational(b)) => a.cmp(b),
            (Rational(a), RealAlgebraic(b)) => b.cmp_rat(a).reverse(),
            (RealAlgebraic(a), Rational(b)) => a.cmp_rat(b),
            (RealAlgebraic(a), RealAlgebraic(b)) => a.cmp_alg(b),
        }
    }

    /// Key used in profile maps and JSON output.
    pub fn label(&self) -> String {
        match self {
            ClosedPointR::Rational(c) => crate::exactmath::fmt_rat(c),
            ClosedPointR::Infinity => "inf".into(),
            ClosedPointR::RealAlgebraic(a) => {
                let (l, h) = a.interval();
                format!(
                    "root({};({},{}))",
                    a.minpoly().to_coeff_string(),
                    crate::exactmath::fmt_rat(&l),
                    crate::exactmath::fmt_rat(&h)
                )
            }
        }
    }
}

impl PartialEq for ClosedPointR {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_point(other) == Ordering::Equal
    }
}
impl Eq for ClosedPointR {}

/// Residue value in the square classes of the real residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residue {
    Trivial,
    Nontrivial,
}

impl Residue {
    fn from_sign(s: i32) -> Residue {
        assert!(s == 1 || s == -1, "residue sign must be +-1");
        if s > 0 {
            Residue::Trivial
        } else {
            Residue::Nontrivial
        }
    }

    pub fn is_nontrivial(self) -> bool {
        self == Residue::Nontrivial
    }
}

/// A quaternion symbol (f, g) over R(u) with rational data.
#[derive(Clone, Debug)]
pub struct QuaternionSymbol {
    pub f: RatFunc,
    pub g: RatFunc,
}

impl QuaternionSymbol {
    pub fn new(f: RatFunc, g: RatFunc) -> crate::Result<Self> {
        if f.is_zero() || g.is_zero() {
            return Err(Error::InvalidInput(
                "symbol slots must be nonzero rational functions".into(),
            ));
        }
        Ok(QuaternionSymbol { f, g })
    }

    pub fn from_polys(f: UniPoly, g: UniPoly) -> crate::Result<Self> {
        QuaternionSymbol::new(RatFunc::from_poly(f), RatFunc::from_poly(g))
    }
}

/// Tame residue of the symbol at a real closed point: the sign class of
/// `(-1)^(v(f)v(g)) f^(v(g)) g^(-v(f))` evaluated at P.
pub fn tame_residue(s: &QuaternionSymbol, p: &ClosedPointR) -> Residue {
    let vf = s.f.valuation(p);
    let vg = s.g.valuation(p);
    if vf == 0 && vg == 0 {
        return Residue::Trivial;
    }
    let mut t = s.f.pow_signed(vg).mul(&s.g.pow_signed(-vf));
    if (vf * vg) % 2 != 0 {
        t = t.mul(&RatFunc::from_poly(UniPoly::constant(-Rat::one())));
    }
    let sg = t.sign_at_point(p);
    debug_assert!(sg != 0, "tame value must be a unit at P");
    Residue::from_sign(sg)
}

/// The residue profile of a symbol: its tame residue at every real closed
/// point where f or g is ramified. Points with trivial residue are kept so
/// the caller can see where the candidate ramification was.
#[derive(Clone, Debug, Default)]
pub struct ResidueProfile {
    pub entries: Vec<(ClosedPointR, Residue)>,
}

impl ResidueProfile {
    pub fn nontrivial_points(&self) -> Vec<&ClosedPointR> {
        self.entries
            .iter()
            .filter(|(_, r)| r.is_nontrivial())
            .map(|(p, _)| p)
            .collect()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|(_, r)| r.is_nontrivial())
            .count()
    }

    pub fn all_trivial(&self) -> bool {
        self.nontrivial_count() == 0
    }

    /// Faddeev exactness over the real projective line forces this.
    pub fn parity_holds(&self) -> bool {
        self.nontrivial_count().is_multiple_of(2)
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(p, r)| {
                (
                    p.label(),
                    match r {
                        Residue::Trivial => "trivial".to_string(),
                        Residue::Nontrivial => "nontrivial".to_string(),
                    },
                )
            })
            .collect()
    }
}

impl PartialEq for ResidueProfile {
    fn eq(&self, other: &Self) -> bool {
        self.to_map() == other.to_map()
    }
}

/// All real closed points where one of the given rational functions
/// ramifies, sorted, deduplicated, infinity last.
fn ramification_points(fs: &[&RatFunc]) -> crate::Result<Vec<ClosedPointR>> {
    let mut pts: Vec<ClosedPointR> = Vec::new();
    let mut push = |p: ClosedPointR| {
        if !pts.iter().any(|q| q == &p) {
            pts.push(p);
        }
    };
    for rf in fs {
        let r = rf.reduced();
        for poly in [r.num(), r.den()] {
            if poly.is_constant() {
                continue;
            }
            for (loc, _) in isolate_real_roots(poly)? {
                match loc {
                    RootLocation::Rational(c) => push(ClosedPointR::Rational(c)),
                    RootLocation::Algebraic(a) => push(ClosedPointR::RealAlgebraic(a)),
                }
            }
        }
        if r.val_at_infinity() != 0 {
            push(ClosedPointR::Infinity);
        }
    }
    pts.sort_by(|a, b| a.cmp_point(b));
    Ok(pts)
}

/// Residue profile of `s` over all real closed points of the projective line.
pub fn residue_profile(s: &QuaternionSymbol) -> crate::Result<ResidueProfile> {
    let pts = ramification_points(&[&s.f, &s.g])?;
    let entries: Vec<(ClosedPointR, Residue)> = pts
        .into_iter()
        .map(|p| {
            let r = tame_residue(s, &p);
            (p, r)
        })
        .collect();
    let profile = ResidueProfile { entries };
    if !profile.parity_holds() {
        return Err(Error::Internal(
            "odd number of nontrivial real residues".into(),
        ));
    }
    Ok(profile)
}

/// Outcome of the residue-sequence decision for a symbol over R(u).
#[derive(Clone, Debug, PartialEq)]
pub enum FaddeevOutcome {
    /// All residues trivial and the constant class vanishes.
    Trivial,
    /// All residues trivial but the symbol is the nonsplit constant class.
    ConstantNontrivial,
    /// Some real residue is nontrivial.
    Ramified(ResidueProfile),
}

/// Decide the class of the symbol: if every residue is trivial the class is
/// constant and one evaluation at an unramified rational point splits
/// trivial from nontrivial; otherwise report the ramification.
pub fn faddeev_decide(s: &QuaternionSymbol) -> crate::Result<FaddeevOutcome> {
    let profile = residue_profile(s)?;
    if !profile.all_trivial() {
        return Ok(FaddeevOutcome::Ramified(profile));
    }
    // evaluate at an unramified rational point
    let mut c = rint(2);
    loop {
        let fv = s.f.eval(&c);
        let gv = s.g.eval(&c);
        match (fv, gv) {
            (Some(a), Some(b)) if !a.is_zero() && !b.is_zero() => {
                let nontrivial = a.is_negative() && b.is_negative();
                return Ok(if nontrivial {
                    FaddeevOutcome::ConstantNontrivial
                } else {
                    FaddeevOutcome::Trivial
                });
            }
            _ => c += Rat::one(),
        }
    }
}

/// A place of Q: the real place or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Real,
    Prime(u64),
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, b, m);
        }
        b = mod_mul(b, b, m);
        e >>= 1;
    }
    acc
}

fn vp_bigint(n: &BigInt, p: u64) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    (v, n)
}

/// p-adic valuation and unit part of a nonzero rational.
fn vp_rat(a: &Rat, p: u64) -> (i64, Rat) {
    let (vn, un) = vp_bigint(a.numer(), p);
    let (vd, ud) = vp_bigint(a.denom(), p);
    (vn - vd, Rat::new(un, ud))
}

/// Legendre symbol of the p-unit `u` (a rational with p-free numerator and
/// denominator) modulo an odd prime p.
fn legendre_unit(u: &Rat, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let n = u.numer().mod_floor(&pb).to_u64().unwrap();
    let d = u.denom().mod_floor(&pb).to_u64().unwrap();
    let dinv = mod_pow(d, p - 2, p);
    let r = mod_mul(n, dinv, p);
    debug_assert!(r != 0);
    let l = mod_pow(r, (p - 1) / 2, p);
    if l == 1 {
        1
    } else {
        -1
    }
}

/// Odd-unit residue of a rational modulo 8 (numerator times inverse of the
/// denominator mod 8).
fn unit_mod8(u: &Rat) -> u64 {
    let eight = BigInt::from(8u32);
    let n = u.numer().mod_floor(&eight).to_u64().unwrap();
    let d = u.denom().mod_floor(&eight).to_u64().unwrap();
    // odd d: d^-1 = d mod 8 since d^2 = 1 mod 8
    (n * d) % 8
}

/// Hilbert symbol (a, b) at a place of Q: +1 when z^2 = a x^2 + b y^2 has a
/// nontrivial solution over the completion, -1 otherwise.
///
/// ```
/// use qfib::exactmath::rint;
/// use qfib::symbols::{hilbert_symbol, Place};
///
/// assert_eq!(hilbert_symbol(&rint(-1), &rint(-3), Place::Prime(3))?, -1);
/// assert_eq!(hilbert_symbol(&rint(-1), &rint(-3), Place::Prime(5))?, 1);
/// # Ok::<(), qfib::Error>(())
/// ```
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> crate::Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition(
            "hilbert symbol needs a, b nonzero".into(),
        ));
    }
    match place {
        Place::Real => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Prime(2) => {
            let (alpha, u) = vp_rat(a, 2);
            let (beta, w) = vp_rat(b, 2);
            let eps = |x: u64| ((x - 1) / 2) % 2; // x odd
            let omega = |x: u64| u64::from(x == 3 || x == 5); // (x^2-1)/8 mod 2 via x mod 8
            let um = unit_mod8(&u);
            let wm = unit_mod8(&w);
            let e = eps(um) * eps(wm)
                + (alpha.rem_euclid(2) as u64) * omega(wm)
                + (beta.rem_euclid(2) as u64) * omega(um);
            Ok(if e.is_multiple_of(2) { 1 } else { -1 })
        }
        Place::Prime(p) => {
            if !is_prime_u64(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            let (alpha, u) = vp_rat(a, p);
            let (beta, w) = vp_rat(b, p);
            let mut s = 1i32;
            if alpha % 2 != 0 && beta % 2 != 0 && ((p - 1) / 2) % 2 == 1 {
                s = -s;
            }
            if beta % 2 != 0 {
                s *= legendre_unit(&u, p);
            }
            if alpha % 2 != 0 {
                s *= legendre_unit(&w, p);
            }
            Ok(s)
        }
    }
}

/// The places where (a, b) can possibly be nontrivial: the real place, 2,
/// and the odd primes dividing a numerator or denominator.
pub fn relevant_places(a: &Rat, b: &Rat) -> Vec<Place> {
    let mut primes: Vec<u64> = vec![2];
    let mut add_factors = |n: &BigInt| {
        let mut n = n.abs();
        while n.is_even() && !n.is_zero() {
            n /= 2u32;
        }
        let mut d = BigInt::from(3u32);
        while (&d * &d) <= n {
            if (&n % &d).is_zero() {
                primes.push(d.to_u64().expect("small factor"));
                while (&n % &d).is_zero() {
                    n /= &d;
                }
            }
            d += 2u32;
        }
        if n > BigInt::one() && n.is_odd() {
            if let Some(p) = n.to_u64() {
                primes.push(p);
            }
        }
    };
    for r in [a, b] {
        add_factors(r.numer());
        add_factors(r.denom());
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Real];
    out.extend(primes.into_iter().map(Place::Prime));
    out
}
