//! Exact computation with truncated q-series.
//!
//! The crate is organised in layers:
//!
//! - [`series`]: arbitrary-precision Laurent-Puiseux series in `q` with exact
//!   rational coefficients, the arithmetic everything else is built on.
//! - [`qpower`]: signed rational powers of `q`, the only argument shape the
//!   symbolic layers accept for theta and Appell arguments.
//! - [`theta`]: Jacobi theta products `j(x; q^rho)` and the classical identity
//!   toolkit around them (elliptic shifts, flips, splittings, quintuple).
//! - [`hecke`]: indefinite binary theta series (double sums over a wedge of
//!   lattice points) and admissible-level string functions.
//! - [`appell`]: level-one Appell sums, Eulerian series, and their
//!   modulus-splitting identities.
//! - [`decomp`]: decompositions of double sums into Appell and theta parts,
//!   for either sign of the discriminant, and the string-function corollaries.
//! - [`registry`]: a named catalogue of all machine-checkable identities plus
//!   a scan utility matching string functions against eta-quotients.
//! - [`modular`]: floating-point verification of modular transformation laws
//!   for the completed (non-holomorphic) companions of the series above.
//!
//! Everything symbolic is exact: coefficients are `BigRational` and a series
//! carries an explicit truncation order, so equality checks up to an order are
//! decidable and failures produce a concrete witness exponent.

pub mod appell;
pub mod decomp;
pub mod hecke;
pub mod modular;
pub mod qpower;
pub mod registry;
pub mod series;
mod sums;
pub mod theta;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used for both exponents and coefficients.
pub type Rat = BigRational;

/// Convenience constructor for a rational from machine integers.
///
/// Panics if `den == 0`; callers only use literal denominators.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integer rational.
pub fn rint(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Binomial coefficient `binomial(n, 2) = n (n - 1) / 2`, defined for all
/// integers (negative `n` included), as a machine integer.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// The alternating sign `(-1)^k` as a rational.
pub(crate) fn alt(k: i64) -> Rat {
    if k.rem_euclid(2) == 0 {
        Rat::from(BigInt::from(1))
    } else {
        Rat::from(BigInt::from(-1))
    }
}

/// Errors shared by every layer of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Inversion needs a nonzero leading coefficient below the truncation
    /// order; the series at hand has none.
    #[error("cannot invert: no nonzero term at or below the truncation order")]
    ZeroLeadingTerm,

    /// A coefficient or comparison was requested beyond the order to which
    /// the series is actually known.
    #[error("order exceeded: requested information at exponent {requested} but the series is only known up to {known}")]
    OrderExceeded { requested: Rat, known: Rat },

    /// The common denominator of the exponent grid grew past the supported
    /// cap; computations never renormalise silently.
    #[error("exponent denominator {needed} exceeds the supported cap {cap}")]
    ScaleCapExceeded { needed: BigInt, cap: i64 },

    /// An infinite product or bilateral sum fails the growth condition that
    /// makes it a well-defined power series.
    #[error("divergent: {context}")]
    Divergent { context: String },

    /// A theta function appearing in a denominator vanishes identically, so
    /// the requested quotient is not defined at this argument.
    #[error("non-generic argument: {context}")]
    NonGeneric { context: String },

    /// An Appell sum hit a term with denominator `1 - q^0 = 0`.
    #[error("Appell sum has a pole: term r = {r} has denominator 1 - q^0")]
    AppellPole { r: i64 },

    /// The theta prefactor of an Appell sum vanishes identically.
    #[error("zero theta denominator: {context}")]
    ZeroThetaDenominator { context: String },

    /// The requested admissible pair has level zero, where the leading
    /// exponent is not defined.
    #[error("level zero: the pair (p, p') = ({p}, {pp}) has p' = 2p")]
    ZeroLevel { p: i64, pp: i64 },

    /// Parameters fail a structural requirement stated by the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No registered identity matches the requested name pattern.
    #[error("unknown case: no registered identity matches `{pattern}`")]
    UnknownCase { pattern: String },

    /// A floating-point evaluation cannot reach the requested tolerance.
    #[error("insufficient precision: {context}")]
    InsufficientPrecision { context: String },

    /// Adaptive quadrature failed to converge.
    #[error("quadrature failure: {context}")]
    QuadratureFailure { context: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
