//! Real connected components of x^2+y^2+z^2 = g(u) t^2 over the circle
//! P^1(R), the first stable birational invariant checked by the pipeline.
//!
//!     cargo run --example components

use qfib::exactmath::UniPoly;
use qfib::fibration::{real_components, witt_rational_rhs};

fn main() {
    let cases = [
        ("u(u^2+1)", &[0i64, 1, 0, 1][..]),
        ("u(u^2-1)", &[0, -1, 0, 1]),
        ("-u^2-1", &[-1, 0, -1]),
        ("u^2-1", &[-1, 0, 1]),
        ("(u^2-1)(u^2-4)", &[4, 0, -5, 0, 1]),
        ("u(u-1)(u-2)", &[0, 2, -3, 1]),
    ];
    for (label, cs) in cases {
        let g = UniPoly::from_i64s(cs);
        println!(
            "g = {label:<18} components = {}   witt section: {}",
            real_components(&g).unwrap(),
            witt_rational_rhs(&g).unwrap(),
        );
    }
}
