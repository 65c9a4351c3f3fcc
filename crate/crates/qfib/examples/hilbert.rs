//! Hilbert symbols over the completions of Q and the product formula.
//!
//!     cargo run --example hilbert

use qfib::exactmath::rint;
use qfib::symbols::{hilbert_symbol, relevant_places, Place};

fn main() {
    // the obstruction detected 3-adically for x^2+y^2+3z^2 = u(u+6)(u+9)
    let v = hilbert_symbol(&rint(-1), &rint(-3), Place::Prime(3)).unwrap();
    println!("(-1, -3) over Q_3  = {v:+}");
    let v = hilbert_symbol(&rint(-1), &rint(-3), Place::Real).unwrap();
    println!("(-1, -3) over R    = {v:+}");

    for (a, b) in [(-1i64, -1i64), (2, 3), (-7, 15), (30, 42)] {
        let (a, b) = (rint(a), rint(b));
        print!("({a}, {b}): ");
        let mut prod = 1;
        for pl in relevant_places(&a, &b) {
            let s = hilbert_symbol(&a, &b, pl).unwrap();
            prod *= s;
            match pl {
                Place::Real => print!("R:{s:+} "),
                Place::Prime(p) => print!("{p}:{s:+} "),
            }
        }
        println!(" product = {prod:+}");
        assert_eq!(prod, 1);
    }
}
