//! Exact-arithmetic toolkit for quadric surface bundles `X -> P^1` over the reals.
//!
//! The crate decides, with certificates wherever a certificate exists, whether
//! a threefold fibred in quadric surfaces over the projective line is
//! rational, fails to be universally CH0-trivial, or is universally
//! CH0-trivial, and reports honest `UNKNOWN` when none of the implemented
//! criteria apply.
//!
//! Everything is computed over the rationals: arbitrary-precision rational
//! coefficients, Sturm sequences for real root work, tame residues of
//! quaternion symbols over R(u), Hilbert symbols over Q_p and R, and exact
//! sum-of-squares certificates checked in the coordinate ring of the relevant
//! variety. No floating point enters any decision path.
//!
//! Entry points:
//! - [`fibration::FibrationSpec`] models the bundle (diagonal or standard form),
//! - [`ch0::analyze`] runs the decision pipeline and returns a [`ch0::Verdict`],
//! - [`soscert`] builds and verifies the sum-of-squares certificates,
//! - [`symbols`] is the residue calculus the obstructions are built from,
//! - [`cli::run`] backs the `qfib` binary.
//!
//! ```
//! use qfib::ch0::{analyze, Status};
//! use qfib::exactmath::UniPoly;
//! use qfib::fibration::FibrationSpec;
//!
//! // x^2 + y^2 + z^2 = u (u^2 + 1)
//! let fib = FibrationSpec::standard_real(UniPoly::from_i64s(&[1, 0, 1]))?;
//! let verdict = analyze(&fib)?;
//! assert_eq!(verdict.status, Status::UnivCh0Trivial);
//! # Ok::<(), qfib::Error>(())
//! ```

pub mod ch0;
pub mod cli;
pub mod exactmath;
pub mod fibration;
pub mod galois;
pub mod pencil;
pub mod report;
pub mod soscert;
pub mod symbols;

use std::fmt;

/// Crate-wide error type. Variants map onto the CLI exit codes: malformed
/// input (2), violated precondition (3), internal invariant failure (4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input does not parse or is structurally invalid.
    InvalidInput(String),
    /// A documented precondition of the operation does not hold.
    Precondition(String),
    /// Fibration data is not an admissible model (non-squarefree entry or a
    /// shared factor between diagonal entries).
    NotAdmissible(String),
    /// The pencil sextic vanishes identically.
    DegeneratePencil,
    /// A certificate denominator reduces to zero in the declared ring.
    DivisionByZeroDenominator,
    /// Division of certificates by a certificate for zero.
    ZeroDivisor,
    /// An internal invariant was violated; indicates a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::NotAdmissible(m) => write!(f, "not an admissible model: {m}"),
            Error::DegeneratePencil => {
                write!(f, "degenerate pencil: det(lf+mg) vanishes identically")
            }
            Error::DivisionByZeroDenominator => {
                write!(
                    f,
                    "certificate denominator reduces to zero in the declared ring"
                )
            }
            Error::ZeroDivisor => write!(f, "division by a certificate for zero"),
            Error::Internal(m) => write!(f, "internal invariant failure: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
