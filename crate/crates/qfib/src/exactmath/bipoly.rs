//! Sparse bivariate polynomials in (u, v) over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{fmt_rat, Rat, UniPoly};
use crate::Error;

/// Sparse bivariate polynomial; key `(i, j)` is the coefficient of `u^i v^j`.
/// No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(c: Rat, i: usize, j: usize) -> Self {
        let mut t = BiPoly::zero();
        t.add_term(c, i, j);
        t
    }

    pub fn add_term(&mut self, c: Rat, i: usize, j: usize) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    /// `p(u)` as a bivariate polynomial in `u`, respectively in `v`.
    pub fn from_unipoly_u(p: &UniPoly) -> Self {
        let mut t = BiPoly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            t.add_term(c.clone(), i, 0);
        }
        t
    }

    pub fn from_unipoly_v(p: &UniPoly) -> Self {
        let mut t = BiPoly::zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            t.add_term(c.clone(), 0, j);
        }
        t
    }

    pub fn degree_u(&self) -> usize {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn degree_v(&self) -> usize {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn eval(&self, u: &Rat, v: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..i {
                t *= u;
            }
            for _ in 0..j {
                t *= v;
            }
            acc += t;
        }
        acc
    }

    /// Serialize as "(i,j):n/d" terms separated by spaces.
    pub fn to_term_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&(i, j), c)| format!("({i},{j}):{}", fmt_rat(c)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parse the "(i,j):n/d" term list format.
    pub fn parse_terms(s: &str) -> crate::Result<BiPoly> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(BiPoly::zero());
        }
        let mut out = BiPoly::zero();
        for tok in s.split_whitespace() {
            let bad = || Error::InvalidInput(format!("bad bivariate term `{tok}`"));
            let (mono, coef) = tok.split_once("):").ok_or_else(bad)?;
            let mono = mono.strip_prefix('(').ok_or_else(bad)?;
            let (i, j) = mono.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            out.add_term(super::parse_rat(coef)?, i, j);
        }
        Ok(out)
    }

    /// Substitute `u = t*v`, returning the coefficients of powers of `v`; the
    /// entry at index `e` is a polynomial in `t`.
    pub fn substitute_u_tv(&self) -> Vec<UniPoly> {
        let mut out: Vec<UniPoly> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let e = i + j;
            if out.len() <= e {
                out.resize(e + 1, UniPoly::zero());
            }
            let add = UniPoly::monomial(c.clone(), i);
            out[e] = &out[e] + &add;
        }
        out
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", fmt_rat(c))?;
            if i > 0 {
                write!(f, "*u^{i}")?;
            }
            if j > 0 {
                write!(f, "*v^{j}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(c.clone(), i, j);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(-c.clone(), i, j);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(c1 * c2, i1 + i2, j1 + j2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(-c.clone(), i, j);
        }
        out
    }
}

/// The exact quotient `r(u,v) = (u p(u) + v p(-v)) / (u + v)`. The dividend
/// vanishes on `u = -v`, so the division is always exact; a nonzero remainder
/// means an arithmetic bug and is reported as an internal error.
pub fn exact_div_u_plus_v(p: &UniPoly) -> crate::Result<BiPoly> {
    let mut dividend = BiPoly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        // u * c u^k
        dividend.add_term(c.clone(), k + 1, 0);
        // v * c (-v)^k
        let s = if k % 2 == 1 { -c.clone() } else { c.clone() };
        dividend.add_term(s, 0, k + 1);
    }
    // Divide by (u + v) treating terms as polynomials in u over Q[v]:
    // dividend = sum_i a_i(v) u^i; synthetic division by u - (-v).
    let du = dividend.degree_u();
    let mut rows: Vec<BiPoly> = vec![BiPoly::zero(); du + 1];
    for (&(i, j), c) in dividend.terms() {
        rows[i].add_term(c.clone(), 0, j);
    }
    let mut quo: Vec<BiPoly> = vec![BiPoly::zero(); du.max(1)];
    let mut carry = BiPoly::zero();
    for i in (1..=du).rev() {
        let q = &rows[i] + &carry;
        // remainder update: subtract q * v from the next coefficient
        carry = -&(&q * &BiPoly::term(Rat::from_integer(1.into()), 0, 1));
        quo[i - 1] = q;
    }
    let rem = &rows[0] + &carry;
    if !rem.is_zero() {
        return Err(Error::Internal(
            "u p(u) + v p(-v) was not divisible by u + v".into(),
        ));
    }
    let mut r = BiPoly::zero();
    for (i, row) in quo.iter().enumerate() {
        for (&(_, j), c) in row.terms() {
            r.add_term(c.clone(), i, j);
        }
    }
    Ok(r)
}
