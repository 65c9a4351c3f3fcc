//! Exact rational arithmetic, univariate and bivariate polynomials, Sturm
//! sequences, real root isolation and sign evaluation at real algebraic
//! points. Everything downstream reduces to this module.

mod bipoly;
mod realalg;
mod sturm;
mod unipoly;

pub use bipoly::{exact_div_u_plus_v, BiPoly};
pub use realalg::{isolate_real_roots, sign_at, RealAlgebraic, RootLocation};
pub use sturm::{real_root_count, sturm_root_count, Endpoint};
pub use unipoly::{separability_check, SeparabilityReport, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision rational; the coefficient field everywhere.
pub type Rat = BigRational;

/// Shorthand constructor from an integer pair, `rat(1, 2) = 1/2`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand constructor from an integer.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Parse "n" or "n/d" with optional sign, e.g. "-3/4".
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty rational".into()));
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad numerator in rational `{s}`")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad denominator in rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(n, d))
}

/// Render a rational as "n" or "n/d".
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact integer square root test: `Some(s)` with `s*s == n` when `n` is a
/// perfect square, `None` otherwise.
pub fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Exact rational square root when one exists.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let n = perfect_square(r.numer())?;
    let d = perfect_square(r.denom())?;
    Some(Rat::new(n, d))
}
