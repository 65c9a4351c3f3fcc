//! Tame residues of quaternion symbols over R(u) and the residue-sequence
//! decision: every symbol with all-trivial residues is constant.
//!
//!     cargo run --example residues

use qfib::exactmath::UniPoly;
use qfib::symbols::{faddeev_decide, residue_profile, QuaternionSymbol};

fn p(cs: &[i64]) -> UniPoly {
    UniPoly::from_i64s(cs)
}

fn show(name: &str, f: UniPoly, g: UniPoly) {
    let s = QuaternionSymbol::from_polys(f, g).unwrap();
    let prof = residue_profile(&s).unwrap();
    println!("{name}");
    for (pt, r) in &prof.entries {
        println!("  residue at {:<28} {:?}", pt.label(), r);
    }
    println!("  decision: {:?}\n", faddeev_decide(&s).unwrap());
}

fn main() {
    // the local-global witness: (-u p(u), u + a) with p positive, a > 0
    show("(-u(u^2+1), u+1)", p(&[0, -1, 0, -1]), p(&[1, 1]));
    // the nontrivial conic class over R(u)
    show("(-1, u)", p(&[-1]), p(&[0, 1]));
    // a Steinberg symbol
    show("(u, 1-u)", p(&[0, 1]), p(&[1, -1]));
    // the constant quaternion class
    show("(-1, -1)", p(&[-1]), p(&[-1]));
    // ramification at an irrational point
    show("(u^2-2, -1)", p(&[-2, 0, 1]), p(&[-1]));
}
