//! Pencils of two quadrics in P^5: the determinant sextic, its
//! separability, and the genus-2 discriminant curve.
//!
//!     cargo run --example pencil

use qfib::exactmath::{rat, rint, Rat};
use qfib::pencil::{pencil_delta, pencil_separable, pencil_sextic, QuadricPencil};

fn main() {
    // smooth: f = sum x_i^2, g = diag(0..5)
    let p = QuadricPencil::diagonal([1; 6], [0, 1, 2, 3, 4, 5]);
    let s = pencil_sextic(&p);
    println!("diagonal pencil: det(l f + m g) = {}", s.to_string_pretty());
    println!("separable: {}", pencil_separable(&p).unwrap());
    let delta = pencil_delta(&p).unwrap();
    println!(
        "discriminant curve w^2 = {} of genus {}\n",
        delta.rhs, delta.genus
    );

    // the singular intersection x^2+y^2+u^2-uw = wy-z^2-t^2 = 0
    let mut f: [[Rat; 6]; 6] = std::array::from_fn(|_| std::array::from_fn(|_| rint(0)));
    f[0][0] = rint(1);
    f[1][1] = rint(1);
    f[2][2] = rint(1);
    f[2][3] = rat(-1, 2);
    f[3][2] = rat(-1, 2);
    let mut g: [[Rat; 6]; 6] = std::array::from_fn(|_| std::array::from_fn(|_| rint(0)));
    g[1][3] = rat(1, 2);
    g[3][1] = rat(1, 2);
    g[4][4] = rint(-1);
    g[5][5] = rint(-1);
    let p = QuadricPencil::new(f, g).unwrap();
    let s = pencil_sextic(&p);
    println!("singular pair: det(l f + m g) = {}", s.to_string_pretty());
    println!(
        "separable: {} (repeated roots betray the singular intersection)",
        pencil_separable(&p).unwrap()
    );
}
