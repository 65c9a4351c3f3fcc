//! Pencils of two quadrics in five-dimensional projective space: the
//! degree-six binary form `det(l f + m g)`, its separability, and the
//! associated genus-2 double cover `w^2 = -det`.

// index pairs mirror the matrix symmetry throughout
#![allow(clippy::needless_range_loop)]

use num_traits::{One, Zero};

use crate::exactmath::{fmt_rat, parse_rat, Rat, UniPoly};
use crate::fibration::HyperellipticCurve;
use crate::Error;

/// A pencil spanned by two quadrics with 6x6 rational symmetric matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPencil {
    pub f: [[Rat; 6]; 6],
    pub g: [[Rat; 6]; 6],
}

fn zero_matrix() -> [[Rat; 6]; 6] {
    std::array::from_fn(|_| std::array::from_fn(|_| Rat::zero()))
}

impl QuadricPencil {
    pub fn new(f: [[Rat; 6]; 6], g: [[Rat; 6]; 6]) -> crate::Result<Self> {
        for m in [&f, &g] {
            for i in 0..6 {
                for j in 0..6 {
                    if m[i][j] != m[j][i] {
                        return Err(Error::InvalidInput("matrices must be symmetric".into()));
                    }
                }
            }
        }
        Ok(QuadricPencil { f, g })
    }

    /// Build from the 21 upper-triangle entries (row-major) of each matrix:
    /// entry (i, j) for i <= j is the coefficient of x_i x_j in the quadric,
    /// so off-diagonal matrix entries are half the input.
    pub fn from_upper_triangles(fu: &[Rat], gu: &[Rat]) -> crate::Result<Self> {
        if fu.len() != 21 || gu.len() != 21 {
            return Err(Error::InvalidInput(
                "expected 21 upper-triangle entries per quadric".into(),
            ));
        }
        let build = |upper: &[Rat]| {
            let mut m = zero_matrix();
            let mut k = 0;
            for i in 0..6 {
                for j in i..6 {
                    let val = if i == j {
                        upper[k].clone()
                    } else {
                        &upper[k] / crate::exactmath::rat(2, 1)
                    };
                    m[i][j] = val.clone();
                    m[j][i] = val;
                    k += 1;
                }
            }
            m
        };
        QuadricPencil::new(build(fu), build(gu))
    }

    pub fn diagonal(fd: [i64; 6], gd: [i64; 6]) -> Self {
        let mut f = zero_matrix();
        let mut g = zero_matrix();
        for i in 0..6 {
            f[i][i] = crate::exactmath::rint(fd[i]);
            g[i][i] = crate::exactmath::rint(gd[i]);
        }
        QuadricPencil { f, g }
    }
}

/// A binary sextic `sum_k c_k l^k m^(6-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySextic {
    pub coeffs: [Rat; 7],
}

impl BinarySextic {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Dehomogenize at m = 1.
    pub fn dehomogenized(&self) -> UniPoly {
        UniPoly::new(self.coeffs.to_vec())
    }

    pub fn eval(&self, l: &Rat, m: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut t = c.clone();
            for _ in 0..k {
                t *= l;
            }
            for _ in k..6 {
                t *= m;
            }
            acc += t;
        }
        acc
    }

    pub fn to_string_pretty(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match (k, 6 - k) {
                (0, _) => "m^6".to_string(),
                (_, 0) => "l^6".to_string(),
                (1, j) => format!("l*m^{j}"),
                (i, 1) => format!("l^{i}*m"),
                (i, j) => format!("l^{i}*m^{j}"),
            };
            parts.push(format!("({})*{}", fmt_rat(c), mono));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Exact 6x6 determinant by fraction-free Gaussian elimination.
fn det6(m: &[[Rat; 6]; 6]) -> Rat {
    let mut a: Vec<Vec<Rat>> = m.iter().map(|r| r.to_vec()).collect();
    let mut det = Rat::one();
    for col in 0..6 {
        let pivot = (col..6).find(|&r| !a[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in (col + 1)..6 {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pv;
            for c in col..6 {
                let t = &a[r][c] - &(&factor * &a[col][c]);
                a[r][c] = t;
            }
        }
    }
    det
}

/// The binary sextic `det(l f + m g)`, computed exactly by interpolation at
/// seven rational parameter values.
pub fn pencil_sextic(pencil: &QuadricPencil) -> BinarySextic {
    // det(l f + g) is a degree <= 6 polynomial in l; interpolate at l = 0..6
    let mut values = Vec::with_capacity(7);
    for l in 0..7i64 {
        let lam = crate::exactmath::rint(l);
        let mut m = zero_matrix();
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = &pencil.f[i][j] * &lam + &pencil.g[i][j];
            }
        }
        values.push(det6(&m));
    }
    // Newton forward differences: diffs[k] ends as the k-th difference at 0
    let mut diffs = values;
    for level in 1..7 {
        for i in (level..7).rev() {
            let t = &diffs[i] - &diffs[i - 1];
            diffs[i] = t;
        }
    }
    // convert sum diffs[k]/k! * l(l-1)...(l-k+1) to monomials
    let mut poly = UniPoly::zero();
    let mut falling = UniPoly::one();
    let mut factorial = Rat::one();
    for (k, d) in diffs.iter().enumerate() {
        if k > 0 {
            factorial *= crate::exactmath::rint(k as i64);
            let shift = UniPoly::new(vec![crate::exactmath::rint(-(k as i64 - 1)), Rat::one()]);
            falling = &falling * &shift;
        }
        let coeff = d / &factorial;
        poly = &poly + &falling.scale(&coeff);
    }
    let mut coeffs = [
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
    ];
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = poly.coeff(k);
    }
    debug_assert!(poly.degree_or0() <= 6);
    BinarySextic { coeffs }
}

/// Separability of the sextic as a binary form: squarefree dehomogenization
/// and multiplicity at most 1 at the point at infinity (m = 0).
pub fn pencil_separable(pencil: &QuadricPencil) -> crate::Result<bool> {
    let sextic = pencil_sextic(pencil);
    if sextic.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    let d = sextic.dehomogenized();
    let inf_mult = 6 - d.degree_or0();
    Ok(d.is_squarefree() && inf_mult <= 1)
}

/// The discriminant double cover of a separable pencil: `w^2 = -det`, a
/// genus-2 hyperelliptic curve.
pub fn pencil_delta(pencil: &QuadricPencil) -> crate::Result<HyperellipticCurve> {
    if !pencil_separable(pencil)? {
        return Err(Error::Precondition(
            "pencil sextic is not separable (singular or degenerate intersection)".into(),
        ));
    }
    let rhs = -&pencil_sextic(pencil).dehomogenized();
    let curve = HyperellipticCurve::new(rhs)?;
    debug_assert_eq!(curve.genus, 2);
    Ok(curve)
}

/// Parse 21 whitespace- or comma-separated rationals.
pub fn parse_upper_triangle(s: &str) -> crate::Result<Vec<Rat>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_rat)
        .collect()
}
