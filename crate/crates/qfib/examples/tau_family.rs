//! Admissible lattice parameters tau = 1/2 + (k/2 beta) sqrt(D): the family
//! y = k / (2 sqrt(n^2+2)) for odd n, k gives dense odd-trace CM points.
//!
//!     cargo run --example tau_family

use qfib::ch0::{cm_tau_admissible, tau_family};

fn main() {
    println!("spot checks:");
    for (d, k, beta) in [(-3i64, 1i64, 1i64), (-4, 1, 1), (-7, 3, 7), (-15, 5, 3)] {
        let v = cm_tau_admissible(d, k, beta);
        println!(
            "  D={d:>4} k={k} beta={beta}: admissible = {}  {}",
            v.admissible,
            v.reasons.join("; ")
        );
    }

    println!("\nthe y(k,n) = k / (2 sqrt(n^2+2)) family (all admissible):");
    for n in (1..=7i64).step_by(2) {
        for k in (1..=7i64).step_by(2) {
            let (d, kk, beta) = tau_family(n, k);
            let v = cm_tau_admissible(d, kk, beta);
            assert!(v.admissible);
            let y = kk as f64 / (2.0 * ((n * n + 2) as f64).sqrt());
            println!("  n={n} k={k}: D={d:>4} beta={beta:>3}   y = {y:.6}");
        }
    }
}
