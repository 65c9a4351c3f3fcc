//! Quadric surface bundles over the projective line: data model, type
//! classification, discriminant curve, real component count, the Witt
//! rationality shortcut and the two-residue-form Brauer obstruction.
//!
//! A bundle is stored by its diagonal entries `<q1, q2, q3, q4>`. At a real
//! closed point P the entries split by parity of valuation into an even and
//! an odd group; reducing the unit parts to signs gives the two residue
//! forms of the local quadric over the completed local field. Everything in
//! this module is a statement about those sign vectors.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactmath::{isolate_real_roots, rat, sign, Endpoint, Rat, RootLocation, UniPoly};
use crate::symbols::ClosedPointR;
use crate::Error;

/// A quadric surface bundle over P^1 given by a diagonal form.
#[derive(Clone, Debug)]
pub enum FibrationSpec {
    /// `x^2 - a y^2 - b z^2 - u p(u) t^2 = 0`.
    Standard { a: Rat, b: Rat, p: UniPoly },
    /// General diagonal entries `<q1, q2, q3, q4>`.
    Diagonal { q: [UniPoly; 4] },
}

impl FibrationSpec {
    pub fn standard(a: Rat, b: Rat, p: UniPoly) -> crate::Result<Self> {
        if p.is_zero() {
            return Err(Error::InvalidInput("p must be nonzero".into()));
        }
        Ok(FibrationSpec::Standard { a, b, p })
    }

    /// The classical real case `x^2 + y^2 + z^2 = u p(u)`.
    pub fn standard_real(p: UniPoly) -> crate::Result<Self> {
        FibrationSpec::standard(-Rat::one(), -Rat::one(), p)
    }

    pub fn diagonal(q: [UniPoly; 4]) -> crate::Result<Self> {
        if q.iter().any(|qi| qi.is_zero()) {
            return Err(Error::InvalidInput(
                "diagonal entries must be nonzero".into(),
            ));
        }
        Ok(FibrationSpec::Diagonal { q })
    }

    /// Diagonal entries of the defining form.
    pub fn entries(&self) -> [UniPoly; 4] {
        match self {
            FibrationSpec::Diagonal { q } => q.clone(),
            FibrationSpec::Standard { a, b, p } => {
                let upu = &UniPoly::var() * p;
                [
                    UniPoly::one(),
                    UniPoly::constant(-a.clone()),
                    UniPoly::constant(-b.clone()),
                    -&upu,
                ]
            }
        }
    }

    pub fn standard_data(&self) -> Option<(&Rat, &Rat, &UniPoly)> {
        match self {
            FibrationSpec::Standard { a, b, p } => Some((a, b, p)),
            FibrationSpec::Diagonal { .. } => None,
        }
    }

    /// True for the `x^2+y^2+z^2 = u p(u)` shape.
    pub fn is_standard_real(&self) -> bool {
        matches!(self.standard_data(), Some((a, b, _)) if *a == -Rat::one() && *b == -Rat::one())
    }
}

impl fmt::Display for FibrationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibrationSpec::Standard { a, b, p } if self.is_standard_real() => {
                let _ = (a, b);
                write!(f, "x^2 + y^2 + z^2 = u*({p}) t^2")
            }
            FibrationSpec::Standard { a, b, p } => {
                write!(
                    f,
                    "x^2 - ({})y^2 - ({})z^2 = u*({}) t^2",
                    crate::exactmath::fmt_rat(a),
                    crate::exactmath::fmt_rat(b),
                    p
                )
            }
            FibrationSpec::Diagonal { q } => {
                write!(f, "<{}; {}; {}; {}>", q[0], q[1], q[2], q[3])
            }
        }
    }
}

/// A hyperelliptic double cover `w^2 = rhs(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    pub rhs: UniPoly,
    pub genus: usize,
}

impl HyperellipticCurve {
    pub fn new(rhs: UniPoly) -> crate::Result<Self> {
        if rhs.is_zero() || rhs.is_constant() {
            return Err(Error::InvalidInput(
                "curve needs a nonconstant right side".into(),
            ));
        }
        if !rhs.is_squarefree() {
            return Err(Error::InvalidInput("right side must be squarefree".into()));
        }
        let genus = (rhs.degree_or0() - 1) / 2;
        Ok(HyperellipticCurve { rhs, genus })
    }
}

/// Valuations and unit signs of the four diagonal entries at one real
/// closed point, with respect to a common local parameter.
#[derive(Clone, Debug)]
pub struct LocalPointData {
    pub point: ClosedPointR,
    pub vals: [i64; 4],
    pub unit_signs: [i32; 4],
}

impl LocalPointData {
    fn group_signs(&self, parity: i64) -> Vec<i32> {
        (0..4)
            .filter(|&i| self.vals[i].rem_euclid(2) == parity)
            .map(|i| self.unit_signs[i])
            .collect()
    }

    pub fn even_signs(&self) -> Vec<i32> {
        self.group_signs(0)
    }

    pub fn odd_signs(&self) -> Vec<i32> {
        self.group_signs(1)
    }

    /// Anisotropic dimension of the odd residue form over the reals: the
    /// smallest corank any regular model can achieve at this point.
    pub fn corank(&self) -> usize {
        let s: i32 = self.odd_signs().iter().sum();
        s.unsigned_abs() as usize
    }

    /// Local two-residue-form test: both the even and the odd pair exist and
    /// are definite. Definiteness is independent of the choice of local
    /// parameter and of similarity scaling, so this is well defined.
    pub fn in_obstruction_set(&self) -> bool {
        let even = self.even_signs();
        let odd = self.odd_signs();
        let definite = |v: &[i32]| v.len() == 2 && v[0] == v[1];
        definite(&even) && definite(&odd)
    }
}

/// Unit sign of `poly / m^k` at the real point described by `loc`, where `m`
/// is the defining polynomial of the point (the linear `u - c` for rational
/// points) and `k` the local valuation of `poly`.
fn unit_sign_at(poly: &UniPoly, loc: &RootLocation) -> i32 {
    match loc {
        RootLocation::Rational(c) => {
            let k = poly.ord_at(c);
            let lin = UniPoly::new(vec![-c.clone(), Rat::one()]);
            let mut f = poly.clone();
            for _ in 0..k {
                f = f.exact_div(&lin).expect("root divides");
            }
            sign(&f.eval(c))
        }
        RootLocation::Algebraic(a) => {
            let m = a.minpoly().clone();
            let mut k = 0i64;
            for (g, e) in poly.squarefree_decomposition() {
                if crate::exactmath::sign_at(&g, a) == 0 {
                    k += e as i64;
                }
            }
            // sign of poly / m^k at the point, via the reduced fraction
            let num = poly.clone();
            let den = m.pow(k as usize);
            let g = num.gcd(&den);
            let n = num.exact_div(&g).unwrap();
            let d = den.exact_div(&g).unwrap();
            crate::exactmath::sign_at(&n, a) * crate::exactmath::sign_at(&d, a)
        }
    }
}

fn val_at(poly: &UniPoly, loc: &RootLocation) -> i64 {
    match loc {
        RootLocation::Rational(c) => poly.ord_at(c) as i64,
        RootLocation::Algebraic(a) => {
            let mut k = 0i64;
            for (g, e) in poly.squarefree_decomposition() {
                if crate::exactmath::sign_at(&g, a) == 0 {
                    k += e as i64;
                }
            }
            k
        }
    }
}

/// Local valuation/sign data of the fibration at every real closed point
/// where some diagonal entry vanishes, plus the point at infinity. This is
/// the locally-diagonalized form of the bundle that both the type check and
/// the obstruction set are read from.
pub fn local_profile(fib: &FibrationSpec) -> crate::Result<Vec<LocalPointData>> {
    let q = fib.entries();
    let mut prod = UniPoly::one();
    for qi in &q {
        if qi.is_zero() {
            return Err(Error::InvalidInput("zero diagonal entry".into()));
        }
        prod = &prod * qi;
    }
    let mut out = Vec::new();
    if !prod.is_constant() {
        for (loc, _) in isolate_real_roots(&prod)? {
            let mut vals = [0i64; 4];
            let mut signs = [0i32; 4];
            for i in 0..4 {
                vals[i] = val_at(&q[i], &loc);
                signs[i] = unit_sign_at(&q[i], &loc);
            }
            let point = match loc {
                RootLocation::Rational(c) => ClosedPointR::Rational(c),
                RootLocation::Algebraic(a) => ClosedPointR::RealAlgebraic(a),
            };
            out.push(LocalPointData {
                point,
                vals,
                unit_signs: signs,
            });
        }
    }
    // infinity: valuation parity is the degree parity, unit sign is the sign
    // of the leading coefficient
    let mut vals = [0i64; 4];
    let mut signs = [0i32; 4];
    for i in 0..4 {
        vals[i] = q[i].degree_or0() as i64;
        signs[i] = sign(&q[i].lc());
    }
    out.push(LocalPointData {
        point: ClosedPointR::Infinity,
        vals,
        unit_signs: signs,
    });
    Ok(out)
}

/// Result of the geometric-fibre classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeClassification {
    pub is_type_i: bool,
    /// Degenerate closed points described by a defining polynomial (or
    /// "inf"), with the corank of the fibre there.
    pub degenerate_points: Vec<(String, usize)>,
}

fn admissibility_error(q: &[UniPoly; 4]) -> Option<String> {
    for (i, qi) in q.iter().enumerate() {
        if !qi.is_squarefree() {
            return Some(format!("q{} = {} is not squarefree", i + 1, qi));
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let g = q[i].gcd(&q[j]);
            if !g.is_constant() {
                return Some(format!("q{} and q{} share the factor {}", i + 1, j + 1, g));
            }
        }
    }
    None
}

/// Split a squarefree polynomial into rational-root factors and the
/// remaining cofactor, as display strings for degenerate-point reports.
fn factor_labels(qi: &UniPoly) -> Vec<String> {
    let mut labels = Vec::new();
    let mut rest = qi.monic();
    if rest.is_constant() {
        return labels;
    }
    for (loc, _) in isolate_real_roots(&rest).expect("nonzero") {
        if let RootLocation::Rational(c) = loc {
            let lin = UniPoly::new(vec![-c, Rat::one()]);
            rest = rest.exact_div(&lin).expect("root divides");
            labels.push(lin.to_expr_string("u"));
        }
    }
    if !rest.is_constant() {
        labels.push(rest.to_expr_string("u"));
    }
    labels
}

/// Classify the fibration: admissible models have corank 1 at every finite
/// degenerate point, so only the fibre at infinity can break integrality.
/// Non-admissible input is rejected; merge the model first and inspect
/// [`local_profile`] / [`effective_not_type_i`] instead.
pub fn classify_type(fib: &FibrationSpec) -> crate::Result<TypeClassification> {
    let q = fib.entries();
    if let Some(msg) = admissibility_error(&q) {
        return Err(Error::NotAdmissible(msg));
    }
    let mut degenerate: Vec<(String, usize)> = Vec::new();
    for qi in &q {
        for label in factor_labels(qi) {
            degenerate.push((label, 1));
        }
    }
    let infinity_corank = {
        let s: i32 = q
            .iter()
            .filter(|qi| qi.degree_or0() % 2 == 1)
            .map(|qi| sign(&qi.lc()))
            .sum();
        s.unsigned_abs() as usize
    };
    if infinity_corank >= 1 {
        degenerate.push(("inf".into(), infinity_corank));
    }
    Ok(TypeClassification {
        is_type_i: infinity_corank <= 1,
        degenerate_points: degenerate,
    })
}

/// True when some real closed point (finite or infinite) forces corank at
/// least 2, i.e. the bundle is not of type (I) no matter the model.
pub fn effective_not_type_i(fib: &FibrationSpec) -> crate::Result<bool> {
    Ok(local_profile(fib)?.iter().any(|d| d.corank() >= 2))
}

/// Discriminant curve of a standard-form bundle: `w^2 = a b v p(-v)`.
pub fn discriminant_curve(fib: &FibrationSpec) -> crate::Result<HyperellipticCurve> {
    let (a, b, p) = fib
        .standard_data()
        .ok_or_else(|| Error::Precondition("discriminant curve needs the standard form".into()))?;
    if !p.is_squarefree() {
        return Err(Error::Precondition("p must be separable".into()));
    }
    if p.eval(&Rat::zero()).is_zero() {
        return Err(Error::Precondition("p(0) must be nonzero".into()));
    }
    let ab = a * b;
    let rhs = (&UniPoly::var() * &p.substitute_neg()).scale(&ab);
    HyperellipticCurve::new(rhs)
}

/// Sample points of the circle P^1(R): rationals strictly between
/// consecutive real roots of `h`, one below all roots, one above all roots.
/// Returns (samples, number_of_roots, roots).
fn circle_samples(h: &UniPoly) -> crate::Result<(Vec<Rat>, Vec<RootLocation>)> {
    let roots: Vec<RootLocation> = isolate_real_roots(h)?
        .into_iter()
        .map(|(loc, _)| loc)
        .collect();
    if roots.is_empty() {
        return Ok((vec![Rat::zero()], roots));
    }
    // bracket each root by a rational interval (degenerate for rational roots)
    let mut brackets: Vec<(Rat, Rat)> = Vec::new();
    let mut refined: Vec<RootLocation> = roots.clone();
    for w in 0..refined.len() {
        if w > 0 {
            // refine until the brackets are strictly separated, so midpoints
            // of gaps can never hit a root
            loop {
                let prev_hi = match &refined[w - 1] {
                    RootLocation::Rational(c) => c.clone(),
                    RootLocation::Algebraic(a) => a.interval().1,
                };
                let cur_lo = match &refined[w] {
                    RootLocation::Rational(c) => c.clone(),
                    RootLocation::Algebraic(a) => a.interval().0,
                };
                if prev_hi < cur_lo {
                    break;
                }
                let mut made_progress = false;
                if let RootLocation::Algebraic(a) = &mut refined[w - 1] {
                    a.refine();
                    made_progress = true;
                }
                if let RootLocation::Algebraic(a) = &mut refined[w] {
                    a.refine();
                    made_progress = true;
                }
                if !made_progress {
                    return Err(Error::Internal("duplicate rational roots".into()));
                }
            }
        }
    }
    for loc in &refined {
        match loc {
            RootLocation::Rational(c) => brackets.push((c.clone(), c.clone())),
            RootLocation::Algebraic(a) => brackets.push(a.interval()),
        }
    }
    let mut samples = Vec::new();
    samples.push(&brackets[0].0 - Rat::one());
    for w in 1..brackets.len() {
        let s = (&brackets[w - 1].1 + &brackets[w].0) / rat(2, 1);
        samples.push(s);
    }
    samples.push(&brackets.last().unwrap().1 + Rat::one());
    Ok((samples, roots))
}

/// Count components of an occupancy pattern on the circle P^1(R). The cycle
/// alternates arcs and breakpoints, with the infinity node between the last
/// and first arc: `arc[0], bp[0], arc[1], ..., bp[n-2], arc[n-1], inf`.
/// Breakpoints are always occupied (a diagonal entry vanishes there, giving
/// the real vertex of a cone).
fn circle_component_count(arcs: &[bool], infinity: bool) -> usize {
    let mut nodes: Vec<bool> = Vec::with_capacity(2 * arcs.len() + 1);
    for (i, &a) in arcs.iter().enumerate() {
        nodes.push(a);
        if i + 1 < arcs.len() {
            nodes.push(true); // breakpoint
        }
    }
    nodes.push(infinity);
    if nodes.iter().all(|&b| b) {
        return 1;
    }
    if nodes.iter().all(|&b| !b) {
        return 0;
    }
    // rotate so the cycle starts at an unoccupied node, then count runs
    let start = nodes.iter().position(|&b| !b).unwrap();
    let n = nodes.len();
    let mut runs = 0;
    let mut in_run = false;
    for k in 0..n {
        let b = nodes[(start + k) % n];
        if b && !in_run {
            runs += 1;
            in_run = true;
        } else if !b {
            in_run = false;
        }
    }
    runs
}

/// Number of connected components of the real locus of
/// `x^2 + y^2 + z^2 = g(u) t^2`: the maximal arcs of the circle P^1(R) where
/// `g > 0`, with boundary zeros absorbed into the closure of an adjacent
/// positive arc. Zero means the real locus is empty.
pub fn real_components(g: &UniPoly) -> crate::Result<usize> {
    if g.is_zero() {
        return Err(Error::Precondition("g must be nonzero".into()));
    }
    if !g.is_squarefree() {
        return Err(Error::Precondition("g must be squarefree".into()));
    }
    if g.is_constant() {
        return Ok(if g.lc().is_positive() { 1 } else { 0 });
    }
    let (samples, roots) = circle_samples(g)?;
    let arcs: Vec<bool> = samples.iter().map(|s| g.eval(s).is_positive()).collect();
    // fibre at infinity: degenerate (hence with a real vertex) for odd
    // degree, otherwise real iff the leading coefficient is positive
    let infinity = g.degree_or0() % 2 == 1 || g.lc().is_positive();
    if roots.is_empty() {
        return Ok(usize::from(arcs[0]));
    }
    Ok(circle_component_count(&arcs, infinity))
}

/// Component count for a general diagonal bundle: arcs of P^1(R) where the
/// fibre has a real point (signs not all equal), remembering that every
/// degenerate fibre of a diagonal form contains the real vertex of its cone.
pub fn real_components_diagonal(fib: &FibrationSpec) -> crate::Result<usize> {
    let q = fib.entries();
    let mut prod = UniPoly::one();
    for qi in &q {
        prod = &prod * qi;
    }
    let mixed = |signs: &[i32]| signs.iter().any(|&x| x != signs[0]);
    let infinity = q.iter().any(|qi| qi.degree_or0() % 2 == 1) || {
        let signs: Vec<i32> = q.iter().map(|qi| sign(&qi.lc())).collect();
        mixed(&signs)
    };
    if prod.is_constant() {
        let signs: Vec<i32> = q.iter().map(|qi| sign(&qi.lc())).collect();
        return Ok(usize::from(mixed(&signs)));
    }
    let (samples, roots) = circle_samples(&prod)?;
    let arcs: Vec<bool> = samples
        .iter()
        .map(|s| {
            let signs: Vec<i32> = q.iter().map(|qi| sign(&qi.eval(s))).collect();
            mixed(&signs)
        })
        .collect();
    if roots.is_empty() {
        return Ok(usize::from(arcs[0] || infinity));
    }
    Ok(circle_component_count(&arcs, infinity))
}

/// Witt shortcut: the bundle `x^2+y^2+z^2 = g(u) t^2` has a section, and the
/// total space is rational over the reals, as soon as `g >= 0` on all of
/// P^1(R) outside a finite set. Works on the sign-relevant part of `g`, so
/// even-multiplicity factors are ignored.
pub fn witt_rational_rhs(g: &UniPoly) -> crate::Result<bool> {
    if g.is_zero() {
        return Err(Error::Precondition("g must be nonzero".into()));
    }
    if !g.lc().is_positive() {
        return Ok(false);
    }
    let mut odd_part = UniPoly::one();
    for (h, k) in g.squarefree_decomposition() {
        if k % 2 == 1 {
            odd_part = &odd_part * &h;
        }
    }
    if odd_part.is_constant() {
        return Ok(true);
    }
    if odd_part.degree_or0() % 2 == 1 {
        return Ok(false);
    }
    Ok(crate::exactmath::sturm_root_count(&odd_part, &Endpoint::NegInf, &Endpoint::PosInf) == 0)
}

/// Witt shortcut on a fibration; requires the definite form
/// `<1,1,1,-g>` up to positive constants.
pub fn witt_rational(fib: &FibrationSpec) -> crate::Result<bool> {
    if let Some((a, b, p)) = fib.standard_data() {
        if *a == -Rat::one() && *b == -Rat::one() {
            return witt_rational_rhs(&(&UniPoly::var() * p));
        }
        return Err(Error::Precondition("witt shortcut needs a = b = -1".into()));
    }
    let q = fib.entries();
    let firsts_positive = q[..3]
        .iter()
        .all(|qi| qi.is_constant() && qi.lc().is_positive());
    if !firsts_positive {
        return Err(Error::Precondition(
            "witt shortcut needs <c1,c2,c3,-g> with positive constants".into(),
        ));
    }
    witt_rational_rhs(&-&q[3])
}

/// Output of the Brauer obstruction computation.
#[derive(Clone, Debug)]
pub struct BrauerObstruction {
    pub obstructed: bool,
    pub t_points: Vec<ClosedPointR>,
    pub disc_is_square: bool,
}

/// Square class of the discriminant `q1 q2 q3 q4` in R(u): a square iff the
/// odd-multiplicity part is constant and the leading coefficient positive.
pub fn disc_is_square(fib: &FibrationSpec) -> bool {
    let q = fib.entries();
    let mut prod = UniPoly::one();
    for qi in &q {
        prod = &prod * qi;
    }
    let mut odd_part = UniPoly::one();
    for (h, k) in prod.squarefree_decomposition() {
        if k % 2 == 1 {
            odd_part = &odd_part * &h;
        }
    }
    odd_part.is_constant() && prod.lc().is_positive()
}

/// The obstruction from the unramified Brauer group of a non-type-(I)
/// bundle. T is the set of real points where both residue forms are
/// definite pairs; the threshold depends on whether the discriminant is a
/// square.
pub fn brauer_obstruction(fib: &FibrationSpec) -> crate::Result<BrauerObstruction> {
    if !effective_not_type_i(fib)? {
        return Err(Error::Precondition(
            "obstruction set is only defined off type (I); the group vanishes there".into(),
        ));
    }
    let square = disc_is_square(fib);
    let t_points: Vec<ClosedPointR> = local_profile(fib)?
        .into_iter()
        .filter(|d| d.in_obstruction_set())
        .map(|d| d.point)
        .collect();
    let obstructed = if square {
        t_points.len() >= 4
    } else {
        t_points.len() >= 2
    };
    Ok(BrauerObstruction {
        obstructed,
        t_points,
        disc_is_square: square,
    })
}
