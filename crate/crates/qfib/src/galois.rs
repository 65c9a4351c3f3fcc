//! Symmetric-group certification for Galois groups of squarefree integer
//! polynomials, by Dedekind reduction: factorization degree patterns modulo
//! good primes are cycle types of Frobenius elements.
//!
//! The certificate is sound, not complete:
//! - the group lies in the alternating group as soon as the discriminant is
//!   a rational square, which rules the full symmetric group out;
//! - an irreducible degree pattern shows the group is transitive;
//! - a pattern with exactly one part equal to 2 and all other parts odd
//!   powers up to a single transposition;
//! - a pattern q + 1 + ... + 1 with q prime and q > n/2 gives a q-cycle
//!   fixing the rest, which forces primitivity for a transitive group;
//! - a primitive group containing a transposition is the full symmetric
//!   group (Jordan).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactmath::{perfect_square, UniPoly};
use crate::symbols::{is_prime_u64, mod_mul, mod_pow};
use crate::Error;

/// Default number of good primes tried before giving up.
pub const DEFAULT_PRIME_BUDGET: usize = 50;

/// Outcome of the certification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SnCertificate {
    /// The Galois group is the full symmetric group; the witnesses are the
    /// primes whose Frobenius cycle types prove transitivity, a
    /// transposition and a large prime cycle.
    CertifiedSn {
        irreducible_mod: u64,
        transposition_mod: u64,
        large_cycle_mod: u64,
    },
    /// The discriminant is a rational square, so the group lies in the
    /// alternating group.
    NotSn { discriminant: String },
    /// Budget exhausted without a full certificate.
    Inconclusive { reason: String },
}

/// Dense polynomial over F_p, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
struct PolyMod {
    c: Vec<u64>,
    p: u64,
}

impl PolyMod {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyMod { c, p }
    }

    fn zero(p: u64) -> Self {
        PolyMod { c: vec![], p }
    }

    fn x(p: u64) -> Self {
        PolyMod::new(vec![0, 1], p)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    fn monic(&self) -> PolyMod {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_pow(*self.c.last().unwrap(), self.p - 2, self.p);
        PolyMod::new(
            self.c.iter().map(|&a| mod_mul(a, inv, self.p)).collect(),
            self.p,
        )
    }

    #[allow(clippy::needless_range_loop)]
    fn sub(&self, other: &PolyMod) -> PolyMod {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            c[i] = (a + p - b) % p;
        }
        PolyMod::new(c, p)
    }

    fn mul(&self, other: &PolyMod) -> PolyMod {
        if self.is_zero() || other.is_zero() {
            return PolyMod::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mod_mul(a, b, p)) % p;
            }
        }
        PolyMod::new(c, p)
    }

    fn rem(&self, d: &PolyMod) -> PolyMod {
        assert!(!d.is_zero());
        let p = self.p;
        let dd = d.degree();
        let mut r = self.c.clone();
        if r.len() < dd + 1 {
            return self.clone();
        }
        let inv = mod_pow(*d.c.last().unwrap(), p - 2, p);
        for i in (dd..r.len()).rev() {
            let q = mod_mul(r[i], inv, p);
            if q == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + p - mod_mul(dc, q, p)) % p;
            }
        }
        PolyMod::new(r[..dd.min(r.len())].to_vec(), p)
    }

    fn divide_exact(&self, d: &PolyMod) -> PolyMod {
        let p = self.p;
        let dd = d.degree();
        let mut r = self.c.clone();
        let mut quo = vec![0u64; r.len().saturating_sub(dd)];
        let inv = mod_pow(*d.c.last().unwrap(), p - 2, p);
        for i in (dd..r.len()).rev() {
            let q = mod_mul(r[i], inv, p);
            quo[i - dd] = q;
            if q == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + p - mod_mul(dc, q, p)) % p;
            }
        }
        debug_assert!(r[..dd].iter().all(|&a| a == 0));
        PolyMod::new(quo, p)
    }

    fn gcd(&self, other: &PolyMod) -> PolyMod {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// x^(p^k) mod self, iterated Frobenius by square-and-multiply.
    fn pow_x_p(&self, base: &PolyMod) -> PolyMod {
        // base^p mod self
        let mut acc = PolyMod::new(vec![1], self.p);
        let mut sq = base.clone();
        let mut e = self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq).rem(self);
            }
            sq = sq.mul(&sq).rem(self);
            e >>= 1;
        }
        acc
    }
}

/// Degree pattern (cycle type of Frobenius) of a squarefree polynomial
/// modulo p, from distinct-degree factorization; sorted ascending.
fn degree_pattern(f: &PolyMod) -> Vec<usize> {
    let mut f = f.monic();
    let n = f.degree();
    let mut pattern = Vec::new();
    let mut h = PolyMod::x(f.p); // x^(p^d) mod f, running
    let mut d = 0usize;
    while f.degree() > 0 {
        d += 1;
        if 2 * d > f.degree() {
            pattern.push(f.degree());
            break;
        }
        h = f.pow_x_p(&h);
        let g = f.gcd(&h.sub(&PolyMod::x(f.p)));
        if !g.is_constant() {
            let count = g.degree() / d;
            for _ in 0..count {
                pattern.push(d);
            }
            f = f.divide_exact(&g);
            h = h.rem(&f);
        }
    }
    debug_assert_eq!(pattern.iter().sum::<usize>(), n);
    pattern.sort_unstable();
    pattern
}

/// A pattern with exactly one even part, that part equal to 2, and all
/// other parts odd: some power of the Frobenius is a transposition.
fn yields_transposition(pattern: &[usize]) -> bool {
    let evens: Vec<usize> = pattern.iter().copied().filter(|l| l % 2 == 0).collect();
    evens == [2]
}

/// A q-cycle fixing everything else, q prime and q > n/2.
fn yields_large_prime_cycle(pattern: &[usize], n: usize) -> bool {
    let big: Vec<usize> = pattern.iter().copied().filter(|&l| l > 1).collect();
    match big.as_slice() {
        [q] => 2 * q > n && is_prime_u64(*q as u64),
        _ => false,
    }
}

fn first_primes(skip: impl Fn(u64) -> bool, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 2u64;
    while out.len() < count {
        if is_prime_u64(p) && !skip(p) {
            out.push(p);
        }
        p += 1;
    }
    out
}

/// Certify that the Galois group of a squarefree `f` of degree >= 5 is the
/// full symmetric group, refute it via a square discriminant, or give up
/// after `budget` good primes.
pub fn zarhin_sn_certificate(f: &UniPoly, budget: usize) -> crate::Result<SnCertificate> {
    let n = f
        .degree()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    if n < 5 {
        return Err(Error::Precondition(format!(
            "degree {n} < 5: the endomorphism-ring argument needs degree at least 5"
        )));
    }
    if !f.is_squarefree() {
        return Err(Error::Precondition("f must be squarefree".into()));
    }
    let disc = f.discriminant()?;
    debug_assert!(!disc.is_zero());
    let sq = perfect_square(&(disc.numer() * disc.denom())).is_some();
    if sq {
        return Ok(SnCertificate::NotSn {
            discriminant: crate::exactmath::fmt_rat(&disc),
        });
    }

    let ints = f.primitive_integer();
    let lead = ints.last().unwrap().clone();
    let disc_num = disc.numer().abs();
    let bad = move |p: u64| {
        let pb = BigInt::from(p);
        (&lead % &pb).is_zero() || (&disc_num % &pb).is_zero()
    };
    let primes = first_primes(bad, budget);

    let mut irreducible_mod = None;
    let mut transposition_mod = None;
    let mut large_cycle_mod = None;
    for &p in &primes {
        let pb = BigInt::from(p);
        let c: Vec<u64> = ints
            .iter()
            .map(|a| a.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect();
        let fp = PolyMod::new(c, p);
        debug_assert_eq!(fp.degree(), n);
        let pattern = degree_pattern(&fp);
        if pattern == [n] && irreducible_mod.is_none() {
            irreducible_mod = Some(p);
        }
        if yields_transposition(&pattern) && transposition_mod.is_none() {
            transposition_mod = Some(p);
        }
        if yields_large_prime_cycle(&pattern, n) && large_cycle_mod.is_none() {
            large_cycle_mod = Some(p);
        }
        if let (Some(a), Some(b), Some(c)) = (irreducible_mod, transposition_mod, large_cycle_mod) {
            return Ok(SnCertificate::CertifiedSn {
                irreducible_mod: a,
                transposition_mod: b,
                large_cycle_mod: c,
            });
        }
    }
    let reason = match (irreducible_mod, transposition_mod, large_cycle_mod) {
        (None, _, _) => "no prime with irreducible reduction found; f may be reducible".to_string(),
        (_, None, _) => "no transposition-type Frobenius found within the prime budget".to_string(),
        (_, _, None) => "no large prime-cycle Frobenius found within the prime budget".to_string(),
        _ => unreachable!(),
    };
    Ok(SnCertificate::Inconclusive { reason })
}
