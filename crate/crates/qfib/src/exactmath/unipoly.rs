//! Dense univariate polynomials over the rationals, ascending coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rat, parse_rat, sign, Rat};
use crate::Error;

/// Univariate polynomial over Q. `coeffs[i]` is the degree-`i` coefficient;
/// the top coefficient is nonzero unless the polynomial is zero (empty vec).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c * u^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    /// The variable `u`.
    pub fn var() -> Self {
        UniPoly::monomial(Rat::one(), 1)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        UniPoly::new(cs.iter().map(|&c| super::rint(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg(0) treated as 0; convenient in genus formulas.
    pub fn degree_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Monic multiple (unit normalization over Q).
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&self.lc().recip())
    }

    /// `p(-u)`.
    pub fn substitute_neg(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `p(u + q)` by Horner on the shifted variable.
    pub fn shift(&self, q: &Rat) -> UniPoly {
        let mut acc = UniPoly::zero();
        let shift = UniPoly::new(vec![q.clone(), Rat::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &shift) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// `u^deg * p(1/u)` — the reversed coefficient list.
    pub fn reverse(&self) -> UniPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        UniPoly::new(coeffs)
    }

    pub fn pow(&self, mut e: usize) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; `None` when `d` is zero.
    pub fn divrem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return None;
        }
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return Some((UniPoly::zero(), self.clone()));
        }
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        let inv_lc = d.lc().recip();
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] * &inv_lc;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let t = &rem[idx] - &(dc * &q);
                rem[idx] = t;
            }
            quo[i - dd] = q;
        }
        Some((
            UniPoly::new(quo),
            UniPoly::new(rem[..dd.min(rem.len())].to_vec()),
        ))
    }

    pub fn rem(&self, d: &UniPoly) -> Option<UniPoly> {
        self.divrem(d).map(|(_, r)| r)
    }

    /// Exact division; errors on nonzero remainder.
    pub fn exact_div(&self, d: &UniPoly) -> crate::Result<UniPoly> {
        let (q, r) = self
            .divrem(d)
            .ok_or_else(|| Error::InvalidInput("division by zero polynomial".into()))?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal("polynomial division was not exact".into()))
        }
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        !self.is_zero() && other.rem(self).is_some_and(|r| r.is_zero())
    }

    /// Monic gcd over Q by the Euclidean algorithm.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Order of vanishing at the linear factor `u - c`.
    pub fn ord_at(&self, c: &Rat) -> usize {
        if self.is_zero() {
            return 0;
        }
        let mut f = self.clone();
        let lin = UniPoly::new(vec![-c.clone(), Rat::one()]);
        let mut ord = 0;
        while f.eval(c).is_zero() {
            f = f.exact_div(&lin).expect("root divides");
            ord += 1;
            if f.is_zero() {
                break;
            }
        }
        ord
    }

    /// Squarefree part `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() || self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Yun squarefree decomposition: returns `[(g_1, 1), (g_2, 2), ...]`
    /// with `self = lc * prod g_k^k`, each `g_k` monic squarefree, pairwise
    /// coprime, constant factors omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.is_zero() || self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).unwrap();
        let mut c = df.exact_div(&a0).unwrap();
        let mut d = &c - &b.derivative();
        let mut k = 1usize;
        loop {
            let a = b.gcd(&d);
            if a.degree_or0() > 0 {
                out.push((a.monic(), k));
            }
            b = b.exact_div(&a).unwrap();
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a).unwrap();
            d = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Resultant of `self` and `other` over Q.
    pub fn resultant(&self, other: &UniPoly) -> Rat {
        fn go(f: &UniPoly, g: &UniPoly) -> Rat {
            if g.is_zero() {
                return if f.is_constant() && !f.is_zero() {
                    Rat::one()
                } else {
                    Rat::zero()
                };
            }
            if g.is_constant() {
                return g
                    .lc()
                    .pow(i32::try_from(f.degree_or0()).expect("degree fits i32"));
            }
            if f.degree_or0() < g.degree_or0() {
                let s = if f.degree_or0() % 2 == 1 && g.degree_or0() % 2 == 1 {
                    -Rat::one()
                } else {
                    Rat::one()
                };
                return s * go(g, f);
            }
            let r = f.rem(g).unwrap();
            let m = f.degree_or0();
            let n = g.degree_or0();
            let dr = r.degree().map(|d| d as i32).unwrap_or(-1);
            if r.is_zero() {
                return Rat::zero();
            }
            let sgn = if (m * n) % 2 == 1 {
                -Rat::one()
            } else {
                Rat::one()
            };
            let factor = g.lc().pow(m as i32 - dr);
            sgn * factor * go(g, &r)
        }
        if self.is_zero() || other.is_zero() {
            if self.is_constant() && other.is_constant() {
                return Rat::one();
            }
            return Rat::zero();
        }
        go(self, other)
    }

    /// Discriminant `(-1)^(n(n-1)/2) res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> crate::Result<Rat> {
        let n = self
            .degree()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Precondition("discriminant needs degree >= 1".into()))?;
        let res = self.resultant(&self.derivative());
        let s = if (n * (n - 1) / 2) % 2 == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        Ok(s * res / self.lc())
    }

    /// Clear denominators and integer content: returns primitive integer
    /// coefficients with the same roots, positive leading coefficient kept
    /// only up to sign of the input.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if g.is_zero() || g.is_one() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Cauchy root bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Rat {
        if self.is_zero() || self.is_constant() {
            return Rat::one();
        }
        let lc = self.lc().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = c.abs() / &lc;
            if v > m {
                m = v;
            }
        }
        m + Rat::one()
    }

    /// Sign of `p(x)` as `x -> +inf`.
    pub fn sign_at_pos_inf(&self) -> i32 {
        sign(&self.lc())
    }

    /// Sign of `p(x)` as `x -> -inf`.
    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = sign(&self.lc());
        if self.degree_or0() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Strictly positive on all of R.
    pub fn is_positive_definite(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return self.lc().is_positive();
        }
        self.lc().is_positive()
            && self.degree_or0().is_multiple_of(2)
            && super::sturm_root_count(self, &super::Endpoint::NegInf, &super::Endpoint::PosInf)
                == 0
    }

    /// Parse the comma-separated ascending coefficient list, e.g. "1,0,1".
    pub fn parse(s: &str) -> crate::Result<UniPoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidInput("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(parse_rat)
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(UniPoly::new(coeffs))
    }

    /// Ascending coefficient list, the external text format.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(fmt_rat)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Human-readable form in the variable `var`.
    pub fn to_expr_string(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match i {
                0 => fmt_rat(&mag),
                1 if mag.is_one() => var.to_string(),
                1 => format!("{}*{var}", fmt_rat(&mag)),
                _ if mag.is_one() => format!("{var}^{i}"),
                _ => format!("{}*{var}^{i}", fmt_rat(&mag)),
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else if c.is_negative() {
                parts.push(format!(" - {body}"));
            } else {
                parts.push(format!(" + {body}"));
            }
        }
        parts.concat()
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_expr_string("u"))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr_string("u"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        UniPoly::new(out)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        UniPoly::new(out)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &out[i + j] + &(a * b);
                out[i + j] = t;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Result of the separability check: `witness` is `gcd(f, f')`.
#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub witness: UniPoly,
}

/// Decide separability of `f`; errors on the zero polynomial.
pub fn separability_check(f: &UniPoly) -> crate::Result<SeparabilityReport> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "separability is undefined for the zero polynomial".into(),
        ));
    }
    let witness = f.gcd(&f.derivative());
    Ok(SeparabilityReport {
        separable: witness.is_constant(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rint};

    fn p(cs: &[i64]) -> UniPoly {
        UniPoly::from_i64s(cs)
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let f = UniPoly::new(vec![rint(1), rint(0), rint(0)]);
        assert_eq!(f.degree(), Some(0));
        assert!(UniPoly::new(vec![rint(0)]).is_zero());
    }

    #[test]
    fn divrem_reconstructs() {
        let f = p(&[3, -2, 0, 5, 1]);
        let d = p(&[1, 1, 2]);
        let (q, r) = f.divrem(&d).unwrap();
        assert_eq!(&(&q * &d) + &r, f);
        assert!(r.degree_or0() < d.degree_or0());
    }

    #[test]
    fn gcd_of_common_factor() {
        let a = &p(&[1, 1]) * &p(&[2, 0, 1]);
        let b = &p(&[1, 1]) * &p(&[-1, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn separability_examples() {
        // u^2 + 1 is separable
        let r = separability_check(&p(&[1, 0, 1])).unwrap();
        assert!(r.separable);
        // (u^2+u+1)^2 is not, witness has degree 2
        let f = p(&[1, 1, 1]);
        let r = separability_check(&(&f * &f)).unwrap();
        assert!(!r.separable);
        assert_eq!(r.witness.degree(), Some(2));
        assert_eq!(r.witness, f.monic());
        // u(u^2+1) is separable
        let r = separability_check(&p(&[0, 1, 0, 1])).unwrap();
        assert!(r.separable);
        // zero polynomial rejected
        assert!(separability_check(&UniPoly::zero()).is_err());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities() {
        // u^3 has the single factor u with multiplicity 3
        let dec = p(&[0, 0, 0, 1]).squarefree_decomposition();
        assert_eq!(dec, vec![(p(&[0, 1]), 3)]);
        // (u-1)^2 (u+2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn resultant_matches_quintic_discriminant_formula() {
        // disc(u^5 + a u + b) = 4^4 a^5 + 5^5 b^4
        for (a, b) in [(-1i64, -1i64), (20, 16), (3, 7), (-2, 5)] {
            let f = p(&[b, a, 0, 0, 0, 1]);
            let disc = f.discriminant().unwrap();
            let expect = rint(256) * rint(a).pow(5) + rint(3125) * rint(b).pow(4);
            assert_eq!(disc, expect, "a={a} b={b}");
        }
    }

    #[test]
    fn shift_and_reverse() {
        let f = p(&[1, 0, 1]); // u^2+1
        let g = f.shift(&rat(1, 1)); // (u+1)^2+1 = u^2+2u+2
        assert_eq!(g, p(&[2, 2, 1]));
        assert_eq!(f.reverse(), p(&[1, 0, 1]));
        assert_eq!(p(&[2, 3]).reverse(), p(&[3, 2]));
    }

    #[test]
    fn ord_at_counts_linear_factors() {
        let f = &(&p(&[0, 1]) * &p(&[0, 1])) * &p(&[1, 0, 1]);
        assert_eq!(f.ord_at(&rint(0)), 2);
        assert_eq!(f.ord_at(&rint(1)), 0);
    }
}
