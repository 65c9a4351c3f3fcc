//! The complex-multiplication side: exact j-invariants of z^2 = u p(u) for
//! quadratic p, the rational CM table, and the odd-trace parity criterion.
//!
//!     cargo run --example cm_curves

use qfib::ch0::{cm_criterion, elliptic_invariants, RATIONAL_CM_J};
use qfib::exactmath::{fmt_rat, UniPoly};

fn main() {
    println!("rational CM j-invariants (order discriminant, j):");
    for (d, j) in RATIONAL_CM_J {
        let parity = if d.rem_euclid(4) == 1 {
            "odd trace"
        } else {
            "even trace"
        };
        println!("  D = {d:>5}   j = {j:>22}   {parity}");
    }
    println!();

    for cs in [[1i64, 0, 1], [3, -3, 1], [112, -21, 1], [5, 4, 1]] {
        let p = UniPoly::from_i64s(&cs);
        let inv = elliptic_invariants(&p).unwrap();
        let cm = cm_criterion(&p).unwrap();
        println!("p = {p}");
        println!("  disc(E) = {}", fmt_rat(&inv.disc));
        println!("  j(E)    = {}", fmt_rat(&inv.j));
        match cm.order_disc {
            Some(d) => println!(
                "  CM by the order of discriminant {d}; parity criterion: {}",
                if cm.parity_pass { "pass" } else { "fail" }
            ),
            None => println!("  no rational CM; parity criterion does not apply"),
        }
        println!();
    }
}
