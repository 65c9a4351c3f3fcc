//! The two-residue-form obstruction set T: real points where the local
//! quadric splits into two definite residue pairs. Off type (I), a large
//! enough T forces a nontrivial unramified Brauer class.
//!
//!     cargo run --example obstruction

use qfib::exactmath::UniPoly;
use qfib::fibration::{
    brauer_obstruction, disc_is_square, effective_not_type_i, local_profile,
    real_components_diagonal, FibrationSpec,
};

fn p(cs: &[i64]) -> UniPoly {
    UniPoly::from_i64s(cs)
}

fn show(label: &str, fib: &FibrationSpec) {
    println!("{label}");
    println!(
        "  real components: {}",
        real_components_diagonal(fib).unwrap()
    );
    println!("  discriminant square: {}", disc_is_square(fib));
    if !effective_not_type_i(fib).unwrap() {
        println!("  type (I): the unramified Brauer group is trivial\n");
        return;
    }
    for d in local_profile(fib).unwrap() {
        if d.corank() >= 1 || d.in_obstruction_set() {
            println!(
                "  at {:<10} corank {}  in T: {}",
                d.point.label(),
                d.corank(),
                d.in_obstruction_set()
            );
        }
    }
    let obs = brauer_obstruction(fib).unwrap();
    println!(
        "  |T| = {}, obstructed: {}\n",
        obs.t_points.len(),
        obs.obstructed
    );
}

fn main() {
    // connected real locus, nontrivial Brauer class
    let fib = FibrationSpec::diagonal([p(&[1]), p(&[1, 0, 1]), p(&[0, -1]), p(&[0, -1])]).unwrap();
    show("x^2 + (1+u^2) y^2 = u (z^2 + t^2)", &fib);

    // square discriminant needs four points; two are not enough
    let fib = FibrationSpec::diagonal([p(&[1]), p(&[1]), p(&[0, -1]), p(&[0, -1])]).unwrap();
    show("x^2 + y^2 = u (z^2 + t^2)", &fib);

    // four odd zeros with definite pairs: obstructed despite the square disc
    let g = &(&p(&[0, 1]) * &p(&[-1, 1])) * &p(&[-2, 1]);
    let fib = FibrationSpec::diagonal([p(&[1]), p(&[1]), -&g, -&g]).unwrap();
    show("x^2 + y^2 = u(u-1)(u-2) (z^2 + t^2)", &fib);

    // type (I) reference case
    let fib = FibrationSpec::standard_real(p(&[1, 0, 1])).unwrap();
    show("x^2 + y^2 + z^2 = u (u^2+1)", &fib);
}
