//! Sturm chains and exact real root counting on extended-rational intervals.

use super::{sign, Rat, UniPoly};

/// Extended rational endpoint for root-counting intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Endpoint {
    pub fn finite(r: Rat) -> Self {
        Endpoint::Finite(r)
    }

    fn leq(&self, other: &Endpoint) -> bool {
        match (self, other) {
            (Endpoint::NegInf, _) => true,
            (_, Endpoint::PosInf) => true,
            (Endpoint::Finite(a), Endpoint::Finite(b)) => a <= b,
            _ => false,
        }
    }
}

/// The canonical Sturm chain of the squarefree part of `f`.
fn sturm_chain(f: &UniPoly) -> Vec<UniPoly> {
    let f0 = f.squarefree_part();
    if f0.is_constant() {
        return vec![f0];
    }
    let mut chain = vec![f0.clone(), f0.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).unwrap();
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_at_endpoint(p: &UniPoly, x: &Endpoint) -> i32 {
    match x {
        Endpoint::NegInf => p.sign_at_neg_inf(),
        Endpoint::PosInf => p.sign_at_pos_inf(),
        Endpoint::Finite(r) => sign(&p.eval(r)),
    }
}

/// Sign variations of the chain at `x`, zeros skipped. With zeros skipped
/// this equals the right-limit count, so differences count roots on
/// half-open intervals `(a, b]`.
fn variations(chain: &[UniPoly], x: &Endpoint) -> usize {
    let mut count = 0;
    let mut last = 0;
    for p in chain {
        let s = sign_at_endpoint(p, x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `f` in `(a, b]`; `a < b` required,
/// infinite endpoints allowed. Panics on the zero polynomial.
pub fn sturm_root_count(f: &UniPoly, a: &Endpoint, b: &Endpoint) -> usize {
    assert!(!f.is_zero(), "sturm_root_count: zero polynomial");
    assert!(a.leq(b) && a != b, "sturm_root_count: need a < b");
    if f.is_constant() {
        return 0;
    }
    let chain = sturm_chain(f);
    let va = variations(&chain, a);
    let vb = variations(&chain, b);
    va.saturating_sub(vb)
}

/// Total number of distinct real roots.
pub fn real_root_count(f: &UniPoly) -> usize {
    sturm_root_count(f, &Endpoint::NegInf, &Endpoint::PosInf)
}
