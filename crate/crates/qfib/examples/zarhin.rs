//! Symmetric-group certification by Frobenius cycle types: a squarefree
//! degree-n polynomial whose reductions exhibit an irreducible pattern, a
//! transposition pattern and a large prime cycle has Galois group S_n, and
//! the hyperelliptic Jacobian of y^2 = f then has no extra endomorphisms.
//!
//!     cargo run --example zarhin

use qfib::exactmath::UniPoly;
use qfib::galois::{zarhin_sn_certificate, SnCertificate};

fn main() {
    let cases = [
        ("u^5 - u - 1", &[-1i64, -1, 0, 0, 0, 1][..]),
        ("u^5 + 20u + 16", &[16, 20, 0, 0, 0, 1]),
        ("u^7 - 7u + 3", &[3, -7, 0, 0, 0, 0, 0, 1]),
        ("(u^2+1)(u^3+2)", &[2, 0, 2, 1, 0, 1]),
    ];
    for (label, cs) in cases {
        let f = UniPoly::from_i64s(cs);
        print!("{label:<18} ");
        match zarhin_sn_certificate(&f, 50).unwrap() {
            SnCertificate::CertifiedSn {
                irreducible_mod,
                transposition_mod,
                large_cycle_mod,
            } => println!(
                "S_n certified (irreducible mod {irreducible_mod}, transposition mod {transposition_mod}, large cycle mod {large_cycle_mod})"
            ),
            SnCertificate::NotSn { discriminant } => {
                println!("not S_n: discriminant {discriminant} is a square")
            }
            SnCertificate::Inconclusive { reason } => println!("inconclusive: {reason}"),
        }
    }
}
