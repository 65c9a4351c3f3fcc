//! Independent oracle for the CM j-invariant table: the q-expansion of j is
//! built exactly from Eisenstein series over the integers (no vendored
//! expansion coefficients), then evaluated at the CM lattice parameter in
//! double-double precision. Truncation and rounding stay far below 1/2, so
//! matching the table integer within 0.4 identifies it exactly.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

// ----------------------------------------------------------------------
// integer power series, truncated at a fixed order
// ----------------------------------------------------------------------

fn series_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n.min(a.len()) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..(n - i).min(b.len()) {
            let t = &a[i] * &b[j];
            out[i + j] += t;
        }
    }
    out
}

/// Inverse of a unit power series (constant term 1).
fn series_inv(a: &[BigInt], n: usize) -> Vec<BigInt> {
    assert!(a[0].is_one());
    let mut out = vec![BigInt::zero(); n];
    out[0] = BigInt::one();
    for k in 1..n {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc += &a[i] * &out[k - i];
        }
        out[k] = -acc;
    }
    out
}

fn sigma3(n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(3);
        }
    }
    acc
}

/// Coefficients c_0..c_(n-1) with j(q) = 1/q + sum_k c_k q^k; c_0 = 744.
#[allow(clippy::needless_range_loop)]
pub fn j_expansion_coefficients(n: usize) -> Vec<BigInt> {
    let order = n + 1;
    // E4 = 1 + 240 sum sigma_3(k) q^k
    let mut e4 = vec![BigInt::zero(); order];
    e4[0] = BigInt::one();
    for k in 1..order {
        e4[k] = BigInt::from(240u32) * sigma3(k as u64);
    }
    let e4_cubed = series_mul(&series_mul(&e4, &e4, order), &e4, order);
    // Delta / q = prod (1 - q^k)^24
    let mut eta24 = vec![BigInt::zero(); order];
    eta24[0] = BigInt::one();
    for k in 1..order {
        let mut factor = vec![BigInt::zero(); order];
        factor[0] = BigInt::one();
        factor[k] = -BigInt::one();
        for _ in 0..24 {
            eta24 = series_mul(&eta24, &factor, order);
        }
    }
    // j q = E4^3 / (Delta/q)
    let jq = series_mul(&e4_cubed, &series_inv(&eta24, order), order);
    assert!(jq[0].is_one(), "leading coefficient of j q must be 1");
    jq[1..].to_vec()
}

// ----------------------------------------------------------------------
// double-double arithmetic
// ----------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_bigint(b: &BigInt) -> Dd {
        let hi = b.to_f64().expect("finite");
        let hi_int = BigInt::from(hi as i128);
        let lo = (b - hi_int).to_f64().expect("finite");
        Dd { hi, lo }
    }

    pub fn from_decimal(s: &str) -> Dd {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let mut acc = Dd::from_f64(0.0);
        let ten = Dd::from_f64(10.0);
        for ch in int_part.chars().chain(frac_part.chars()) {
            let d = ch.to_digit(10).expect("digit") as f64;
            acc = acc.mul(ten).add(Dd::from_f64(d));
        }
        let mut scale = Dd::from_f64(1.0);
        for _ in 0..frac_part.len() {
            scale = scale.mul(ten);
        }
        acc.div(scale)
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / o.hi;
        Dd::from_f64(q1).add(Dd::from_f64(q2)).add(Dd::from_f64(q3))
    }

    pub fn sqrt(self) -> Dd {
        let x0 = Dd::from_f64(self.hi.sqrt());
        let half = Dd::from_f64(0.5);
        let mut x = x0;
        for _ in 0..3 {
            x = x.add(self.div(x)).mul(half);
        }
        x
    }

    /// exp for moderate negative arguments via 2^n * exp(r).
    pub fn exp(self) -> Dd {
        let ln2 = Dd::from_decimal("0.69314718055994530941723212145817656807550013436026");
        let n = (self.hi / ln2.hi).round();
        let r = self.sub(ln2.mul(Dd::from_f64(n)));
        // Taylor on |r| <= ln2/2
        let mut sum = Dd::from_f64(1.0);
        let mut term = Dd::from_f64(1.0);
        for k in 1..=30 {
            term = term.mul(r).div(Dd::from_f64(k as f64));
            sum = sum.add(term);
        }
        let scale = 2f64.powi(n as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }
}

/// |j(tau_D) - claim| evaluated from the exact expansion coefficients.
pub fn j_error(d: i64, claim: i64, coeffs: &[BigInt]) -> f64 {
    assert!(d < 0);
    let pi = Dd::from_decimal("3.14159265358979323846264338327950288419716939937510");
    let abs_d = Dd::from_f64((-d) as f64);
    // q = sign * exp(-pi sqrt(|D|)), negative exactly when D is odd
    let magnitude = pi.neg().mul(abs_d.sqrt()).exp();
    let q = if d.rem_euclid(4) == 1 {
        magnitude.neg()
    } else {
        magnitude
    };
    let mut j = Dd::from_f64(1.0).div(q);
    let mut qk = Dd::from_f64(1.0);
    for c in coeffs {
        j = j.add(Dd::from_bigint(c).mul(qk));
        qk = qk.mul(q);
    }
    j.sub(Dd::from_bigint(&BigInt::from(claim))).abs().hi()
}
