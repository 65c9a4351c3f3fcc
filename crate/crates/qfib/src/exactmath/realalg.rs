//! Real algebraic numbers as (squarefree defining polynomial, isolating
//! interval) pairs, with exact sign evaluation by interval refinement.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::{rat, sign, sturm::sturm_root_count, Endpoint, Rat, UniPoly};
use crate::Error;

/// A real algebraic number: the unique root of `minpoly` in `(lo, hi)`.
///
/// `minpoly` is monic and squarefree; it need not be irreducible, which is
/// enough for every sign computation in this crate. The endpoints are never
/// roots of `minpoly`.
#[derive(Clone)]
pub struct RealAlgebraic {
    minpoly: UniPoly,
    lo: Rat,
    hi: Rat,
}

impl RealAlgebraic {
    pub fn new(minpoly: UniPoly, lo: Rat, hi: Rat) -> crate::Result<Self> {
        if minpoly.is_zero() || minpoly.is_constant() {
            return Err(Error::InvalidInput("minpoly must be nonconstant".into()));
        }
        if !minpoly.is_squarefree() {
            return Err(Error::InvalidInput("minpoly must be squarefree".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidInput("need lo < hi".into()));
        }
        let m = minpoly.monic();
        if m.eval(&lo).is_zero() || m.eval(&hi).is_zero() {
            return Err(Error::InvalidInput(
                "interval endpoints must not be roots of minpoly".into(),
            ));
        }
        let n = sturm_root_count(
            &m,
            &Endpoint::Finite(lo.clone()),
            &Endpoint::Finite(hi.clone()),
        );
        if n != 1 {
            return Err(Error::InvalidInput(format!(
                "interval isolates {n} roots, expected exactly 1"
            )));
        }
        Ok(RealAlgebraic { minpoly: m, lo, hi })
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> (Rat, Rat) {
        (self.lo.clone(), self.hi.clone())
    }

    /// One bisection step. If the midpoint happens to be the root itself the
    /// interval is recentered symmetrically around it.
    pub fn refine(&mut self) {
        let mid = (&self.lo + &self.hi) / rat(2, 1);
        let vm = self.minpoly.eval(&mid);
        if vm.is_zero() {
            self.lo = (&self.lo + &mid) / rat(2, 1);
            self.hi = (&mid + &self.hi) / rat(2, 1);
            return;
        }
        let vl = self.minpoly.eval(&self.lo);
        if sign(&vl) != sign(&vm) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    pub fn refine_to_width(&mut self, width: &Rat) {
        while &(&self.hi - &self.lo) > width {
            self.refine();
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rat(&self, c: &Rat) -> Ordering {
        if c <= &self.lo {
            return Ordering::Greater;
        }
        if c >= &self.hi {
            return Ordering::Less;
        }
        if self.minpoly.eval(c).is_zero() {
            // the unique root in the interval is c itself
            return Ordering::Equal;
        }
        let mut a = self.clone();
        loop {
            a.refine();
            if c <= &a.lo {
                return Ordering::Greater;
            }
            if c >= &a.hi {
                return Ordering::Less;
            }
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_alg(&self, other: &RealAlgebraic) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            // overlapping: equal iff a is a root of b.minpoly lying in b's interval
            if sign_at(&b.minpoly, &a) == 0
                && a.cmp_rat(&b.lo) == Ordering::Greater
                && a.cmp_rat(&b.hi) == Ordering::Less
            {
                return Ordering::Equal;
            }
            a.refine();
            b.refine();
        }
    }

    /// Midpoint as f64, for display only.
    pub fn approx(&self) -> f64 {
        let mut a = self.clone();
        a.refine_to_width(&rat(1, 1_000_000));
        let mid = (&a.lo + &a.hi) / rat(2, 1);
        let n = mid.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = mid.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        n / d
    }
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RealAlgebraic({} in ({}, {}))",
            self.minpoly, self.lo, self.hi
        )
    }
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_alg(other) == Ordering::Equal
    }
}
impl Eq for RealAlgebraic {}

/// Sign of `g` at the real algebraic point, exactly. Zero iff the point is a
/// common root of `g` and the defining polynomial.
pub fn sign_at(g: &UniPoly, alpha: &RealAlgebraic) -> i32 {
    if g.is_zero() {
        return 0;
    }
    if g.is_constant() {
        return sign(&g.lc());
    }
    let h = g.gcd(&alpha.minpoly);
    if !h.is_constant() {
        let n = sturm_root_count(
            &h,
            &Endpoint::Finite(alpha.lo.clone()),
            &Endpoint::Finite(alpha.hi.clone()),
        );
        if n > 0 {
            return 0;
        }
    }
    // g(alpha) != 0: refine until g has constant sign on the interval
    let mut a = alpha.clone();
    loop {
        let gl = g.eval(&a.lo);
        if !gl.is_zero() {
            let inside = sturm_root_count(
                g,
                &Endpoint::Finite(a.lo.clone()),
                &Endpoint::Finite(a.hi.clone()),
            );
            if inside == 0 || (inside == 1 && g.eval(&a.hi).is_zero()) {
                // no root of g strictly inside, and alpha is strictly inside
                let gm = g.eval(&((&a.lo + &a.hi) / rat(2, 1)));
                if !gm.is_zero() {
                    return sign(&gm);
                }
            }
        }
        a.refine();
    }
}

/// Where an isolated real root lives.
#[derive(Clone, Debug)]
pub enum RootLocation {
    Rational(Rat),
    Algebraic(RealAlgebraic),
}

impl RootLocation {
    pub fn cmp_loc(&self, other: &RootLocation) -> Ordering {
        match (self, other) {
            (RootLocation::Rational(a), RootLocation::Rational(b)) => a.cmp(b),
            (RootLocation::Rational(a), RootLocation::Algebraic(b)) => b.cmp_rat(a).reverse(),
            (RootLocation::Algebraic(a), RootLocation::Rational(b)) => a.cmp_rat(b),
            (RootLocation::Algebraic(a), RootLocation::Algebraic(b)) => a.cmp_alg(b),
        }
    }

    /// Sign of `g` at the root.
    pub fn sign_of(&self, g: &UniPoly) -> i32 {
        match self {
            RootLocation::Rational(c) => sign(&g.eval(c)),
            RootLocation::Algebraic(a) => sign_at(g, a),
        }
    }
}

/// Rational roots of a squarefree polynomial, found by bounded divisor
/// enumeration of the primitive integer model. Complete whenever the ends
/// factor within the trial-division budget, which covers every input this
/// crate produces in practice; missed rational roots simply stay represented
/// as algebraic numbers.
fn rational_roots(f: &UniPoly) -> Vec<Rat> {
    use num_bigint::BigInt;
    use num_traits::One;

    fn divisors_bounded(n: &BigInt) -> Option<Vec<BigInt>> {
        let mut n = n.clone();
        if n.is_zero() {
            return Some(vec![]);
        }
        if n < BigInt::zero() {
            n = -n;
        }
        let mut primes: Vec<(BigInt, u32)> = Vec::new();
        let mut d = BigInt::from(2u32);
        let limit = BigInt::from(1_000_000u64);
        while &d * &d <= n {
            if d > limit {
                return None; // cofactor too hard; give up on completeness
            }
            let mut e = 0u32;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            if e > 0 {
                primes.push((d.clone(), e));
            }
            d += 1u32;
        }
        if !n.is_one() {
            primes.push((n, 1));
        }
        let mut divs = vec![BigInt::one()];
        for (p, e) in primes {
            let mut next = Vec::new();
            for d0 in &divs {
                let mut pk = BigInt::one();
                for _ in 0..=e {
                    next.push(d0 * &pk);
                    pk *= &p;
                }
            }
            next.sort();
            next.dedup();
            divs = next;
            if divs.len() > 4096 {
                return None;
            }
        }
        Some(divs)
    }

    let ints = f.primitive_integer();
    if ints.len() < 2 {
        return vec![];
    }
    let mut out = Vec::new();
    let a0 = ints.iter().find(|c| !c.is_zero()).cloned().unwrap();
    if ints[0].is_zero() {
        out.push(Rat::zero());
    }
    let an = ints.last().unwrap().clone();
    let (num_divs, den_divs) = match (divisors_bounded(&a0), divisors_bounded(&an)) {
        (Some(a), Some(b)) => (a, b),
        _ => return out,
    };
    for n in &num_divs {
        for d in &den_divs {
            for s in [1i64, -1] {
                let c = Rat::new(n * BigInt::from(s), d.clone());
                if f.eval(&c).is_zero() && !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Isolate all real roots of `f` with multiplicities, sorted ascending.
/// Rational roots are reported exactly; the rest come with isolating
/// intervals whose endpoints are never roots.
pub fn isolate_real_roots(f: &UniPoly) -> crate::Result<Vec<(RootLocation, usize)>> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    let mut out: Vec<(RootLocation, usize)> = Vec::new();
    for (g, mult) in f.squarefree_decomposition() {
        for loc in isolate_squarefree(&g) {
            out.push((loc, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_loc(&b.0));
    Ok(out)
}

/// Isolate the real roots of a squarefree `g`, ascending.
pub(crate) fn isolate_squarefree(g: &UniPoly) -> Vec<RootLocation> {
    let mut g = g.monic();
    let mut out: Vec<RootLocation> = Vec::new();
    for c in rational_roots(&g) {
        let lin = UniPoly::new(vec![-c.clone(), Rat::one()]);
        g = g.exact_div(&lin).expect("rational root divides");
        out.push(RootLocation::Rational(c));
    }
    'restart: loop {
        if g.is_constant() {
            break;
        }
        let bound = g.root_bound();
        let lo = -bound.clone();
        let hi = bound;
        debug_assert!(!g.eval(&lo).is_zero() && !g.eval(&hi).is_zero());
        let total = sturm_root_count(
            &g,
            &Endpoint::Finite(lo.clone()),
            &Endpoint::Finite(hi.clone()),
        );
        let mut stack = vec![(lo, hi, total)];
        let mut isolated: Vec<RealAlgebraic> = Vec::new();
        while let Some((lo, hi, n)) = stack.pop() {
            if n == 0 {
                continue;
            }
            let mid = (&lo + &hi) / rat(2, 1);
            if g.eval(&mid).is_zero() {
                // missed rational root: peel it off and redo the isolation
                let lin = UniPoly::new(vec![-mid.clone(), Rat::one()]);
                g = g.exact_div(&lin).expect("root divides");
                out.push(RootLocation::Rational(mid));
                continue 'restart;
            }
            if n == 1 {
                // shrink a little so sibling intervals never share the root
                let nl = sturm_root_count(
                    &g,
                    &Endpoint::Finite(lo.clone()),
                    &Endpoint::Finite(mid.clone()),
                );
                let (l, h) = if nl == 1 { (lo, mid) } else { (mid, hi) };
                isolated.push(RealAlgebraic {
                    minpoly: g.clone(),
                    lo: l,
                    hi: h,
                });
                continue;
            }
            let nl = sturm_root_count(
                &g,
                &Endpoint::Finite(lo.clone()),
                &Endpoint::Finite(mid.clone()),
            );
            stack.push((lo, mid.clone(), nl));
            stack.push((mid, hi, n - nl));
        }
        out.extend(isolated.into_iter().map(RootLocation::Algebraic));
        break;
    }
    out.sort_by(|a, b| a.cmp_loc(b));
    out
}
