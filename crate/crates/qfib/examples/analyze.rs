//! Run the full decision pipeline on the three headline quadratic bundles
//! and on the connected bundle with a nontrivial Brauer class.
//!
//!     cargo run --example analyze

use qfib::ch0::analyze;
use qfib::exactmath::UniPoly;
use qfib::fibration::FibrationSpec;

fn show(label: &str, fib: &FibrationSpec) {
    let verdict = analyze(fib).expect("analysis runs");
    println!("{label}");
    println!("  {fib}");
    println!("  status: {}", verdict.status);
    for e in &verdict.reasons {
        println!("    [{}] {}", e.criterion, e.summary);
    }
    println!();
}

fn main() {
    let quadratics = [
        ("x^2+y^2+z^2 = u(u^2+1)", &[1i64, 0, 1][..]),
        ("x^2+y^2+z^2 = u(u^2-3u+3)", &[3, -3, 1]),
        ("x^2+y^2+z^2 = u(u^2-21u+112)", &[112, -21, 1]),
        ("x^2+y^2+z^2 = u(u^2+4u+5)", &[5, 4, 1]),
    ];
    for (label, cs) in quadratics {
        let fib = FibrationSpec::standard_real(UniPoly::from_i64s(cs)).unwrap();
        show(label, &fib);
    }

    // connected real locus, yet obstructed through the Brauer group
    let fib = FibrationSpec::diagonal([
        UniPoly::from_i64s(&[1]),
        UniPoly::from_i64s(&[1, 0, 1]),
        UniPoly::from_i64s(&[0, -1]),
        UniPoly::from_i64s(&[0, -1]),
    ])
    .unwrap();
    show("x^2 + (1+u^2) y^2 = u (z^2 + t^2)", &fib);

    // a section exists: rational by the local-global principle for the form
    let g = &UniPoly::from_i64s(&[1, 0, 1]) * &UniPoly::from_i64s(&[2, 0, 1]);
    let fib =
        FibrationSpec::diagonal([UniPoly::one(), UniPoly::one(), UniPoly::one(), -&g]).unwrap();
    println!("x^2+y^2+z^2 = (u^2+1)(u^2+2)");
    println!(
        "  witt section exists: {}",
        qfib::fibration::witt_rational(&fib).unwrap()
    );
}
