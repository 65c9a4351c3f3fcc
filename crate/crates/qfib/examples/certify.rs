//! Build and verify the sum-of-squares certificates behind the quadratic
//! criterion: the three-square decomposition of the residual function r and
//! the four-square certificate for u + v in the coordinate ring of W.
//!
//!     cargo run --example certify

use qfib::exactmath::{exact_div_u_plus_v, UniPoly};
use qfib::soscert::{certify_u_plus_v, criterion_a_certificate, euler_compose, SOSCertificate};

fn main() {
    for cs in [[1i64, 0, 1], [3, -3, 1], [1, 1, 1]] {
        let p = UniPoly::from_i64s(&cs);
        println!("p = {p}");
        println!("  r(u,v) = {:?}", exact_div_u_plus_v(&p).unwrap());
        let r_cert = criterion_a_certificate(&p).unwrap().expect("applies");
        println!(
            "  r is a weighted sum of {} squares, verified: {}",
            r_cert.square_count(),
            r_cert.verify().unwrap()
        );
        let uv = certify_u_plus_v(&p).unwrap();
        println!(
            "  u+v is a sum of {} squares in the ring of W, verified: {}",
            uv.square_count(),
            uv.verify().unwrap()
        );
        if !uv.ext.radicands().is_empty() {
            println!(
                "  adjoined square roots: {:?}",
                uv.ext
                    .radicands()
                    .iter()
                    .map(qfib::exactmath::fmt_rat)
                    .collect::<Vec<_>>()
            );
        }
        println!();
    }

    // Euler composition on plain certificates
    let two = SOSCertificate {
        ring: qfib::soscert::RingKind::Plain,
        ext: qfib::soscert::Extension::none(),
        target: qfib::soscert::Frac::rational(qfib::exactmath::rint(2)),
        entries: vec![
            (
                qfib::exactmath::rint(1),
                qfib::soscert::Frac::rational(qfib::exactmath::rint(1)),
            ),
            (
                qfib::exactmath::rint(1),
                qfib::soscert::Frac::rational(qfib::exactmath::rint(1)),
            ),
        ],
    };
    let six = euler_compose(&two, &{
        let mut t = two.clone();
        t.target = qfib::soscert::Frac::rational(qfib::exactmath::rint(3));
        t.entries.push((
            qfib::exactmath::rint(1),
            qfib::soscert::Frac::rational(qfib::exactmath::rint(1)),
        ));
        t
    })
    .unwrap();
    println!(
        "2 * 3 composed into {} squares, verified: {}",
        six.square_count(),
        six.verify().unwrap()
    );

    // print one certificate in the exchange format
    let cert = certify_u_plus_v(&UniPoly::from_i64s(&[1, 0, 1])).unwrap();
    println!("\ncertificate JSON for p = u^2+1:\n{}", cert.to_json());
}
