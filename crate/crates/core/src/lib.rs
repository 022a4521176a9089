//! Exact-arithmetic kernels for counting local multiplicities of rational
//! points on projective hypersurfaces over finite fields.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf`]: prime fields `F_p` and extensions `F_{p^k}` in polynomial basis,
//!   with enumeration, Frobenius, and embeddings between compatible extensions;
//! - [`mpoly`]: sparse multivariate polynomials, Hasse/Taylor coefficient
//!   extraction, coordinate translation;
//! - [`ideals`]: a small Buchberger engine with dimension, reducedness and
//!   complete-intersection search built on top;
//! - [`geom`]: projective point enumeration, Gaussian-binomial counting,
//!   Frobenius orbits (closed points) and descent of rational points;
//! - [`localmult`]: local multiplicities by two independent algorithms, the
//!   Hilbert-Samuel formula and its rank oracle, 0-dimensional local lengths
//!   and plane-curve intersection multiplicities;
//! - [`itree`]: labeled, edge-weighted intersection trees with weight
//!   computations, structural validation and inequality checks;
//! - [`harness`]: corpus generation, end-to-end bound verification and
//!   reporting.

pub mod geom;
pub mod gf;
pub mod harness;
pub mod ideals;
pub mod itree;
pub mod localmult;
pub mod mpoly;
mod upoly;

use std::fmt;

/// Crate-wide error type. Variants carry enough context to print a
/// one-line diagnostic; none of them are recoverable mid-computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` is not a prime number.
    NonPrime(u64),
    /// `p^k` exceeds the desk-scale cardinality cap.
    FieldCap { p: u64, k: u32 },
    /// Source degree does not divide target degree (or characteristics differ).
    IncompatibleEmbedding,
    /// No root of the source modulus in the target field; the source
    /// descriptor carries a broken modulus.
    EmbeddingRootMissing,
    /// Text input rejected at byte offset `pos`.
    Parse { pos: usize, msg: String },
    /// Polynomial/point arity does not match the ambient space.
    ArityMismatch { expected: usize, got: usize },
    /// An operation that needs a nonzero polynomial received zero.
    ZeroPolynomial,
    /// A hypersurface equation must be homogeneous.
    NotHomogeneous,
    /// Hasse expansion order outside `1..=delta`.
    OrderOutOfRange { alpha: u32, delta: u32 },
    /// Dehomogenization chart coordinate vanishes at the point.
    ZeroChartCoordinate,
    /// The point does not lie on the hypersurface.
    PointNotOnHypersurface,
    /// No nonvanishing derivative up to the degree; the local equation is
    /// degenerate at the point.
    NoNonvanishingDerivative { delta: u32 },
    /// Point enumeration would exceed the configured budget.
    EnumerationBudget { needed: u128, budget: u128 },
    /// Buchberger ceiling exceeded; carries pair-queue statistics.
    GroebnerCeiling {
        processed: usize,
        pending: usize,
        basis: usize,
    },
    /// Buchberger input outside the desk-scale guard.
    GroebnerGuard { vars: usize, degree: u32 },
    /// An affine system expected to be finite has a positive-dimensional locus.
    NotZeroDimensional,
    /// Local-length staircase failed to stabilize below the cap; the point is
    /// not isolated or the cap is too small.
    StabilizationCap { cap: u32 },
    /// Two curves share a component through the point.
    NonProperIntersection,
    /// Complete-intersection search exhausted all extensions up to `max_m`.
    SearchExhausted { max_m: usize },
    /// Tree path does not exist.
    PathNotInTree,
    /// Aggregating the left side needs every root weight recorded.
    MissingRootWeight,
    /// The target does not satisfy the descendant-occurrence eligibility;
    /// the inequality is not applicable (this is not a failure verdict).
    IneligibleTarget(String),
    /// The operation requires a reduced hypersurface.
    NonReducedInput(String),
    /// Corpus rejection sampling ran out of budget.
    RejectionBudget { tried: u64 },
    /// Closed-point materialization is incomplete at the residue-degree cap.
    IncompleteClosedPoints {
        found: u128,
        expected: u128,
        max_m: usize,
    },
    /// Tree file rejected.
    TreeFormat(String),
    /// Operation precondition violated (catch-all with context).
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrime(p) => write!(f, "{p} is not prime"),
            Error::FieldCap { p, k } => write!(f, "{p}^{k} exceeds the field cardinality cap 2^20"),
            Error::IncompatibleEmbedding => write!(f, "no embedding: source degree must divide target degree over the same characteristic"),
            Error::EmbeddingRootMissing => write!(f, "source modulus has no root in the target field"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::ArityMismatch { expected, got } => write!(f, "arity mismatch: expected {expected}, got {got}"),
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            Error::NotHomogeneous => write!(f, "polynomial is not homogeneous"),
            Error::OrderOutOfRange { alpha, delta } => write!(f, "expansion order {alpha} outside 1..={delta}"),
            Error::ZeroChartCoordinate => write!(f, "chart coordinate vanishes at the point"),
            Error::PointNotOnHypersurface => write!(f, "point does not lie on the hypersurface"),
            Error::NoNonvanishingDerivative { delta } => write!(f, "no nonvanishing derivative up to order {delta}"),
            Error::EnumerationBudget { needed, budget } => write!(f, "enumeration needs {needed} points, budget is {budget}"),
            Error::GroebnerCeiling { processed, pending, basis } => write!(f, "Groebner ceiling exceeded: {processed} pairs processed, {pending} pending, basis size {basis}"),
            Error::GroebnerGuard { vars, degree } => write!(f, "input outside desk-scale guard: {vars} variables, degree {degree}"),
            Error::NotZeroDimensional => write!(f, "system has a positive-dimensional solution locus"),
            Error::StabilizationCap { cap } => write!(f, "staircase did not stabilize below degree {cap}"),
            Error::NonProperIntersection => write!(f, "curves share a component through the point"),
            Error::SearchExhausted { max_m } => write!(f, "search exhausted over extensions up to degree {max_m}"),
            Error::PathNotInTree => write!(f, "path does not exist in the tree"),
            Error::MissingRootWeight => write!(f, "a tree is missing its root weight"),
            Error::IneligibleTarget(why) => write!(f, "target not eligible: {why}"),
            Error::NonReducedInput(why) => write!(f, "hypersurface is not reduced: {why}"),
            Error::RejectionBudget { tried } => write!(f, "rejection sampling budget exhausted after {tried} draws"),
            Error::IncompleteClosedPoints { found, expected, max_m } => write!(f, "closed points account for {found} of {expected} at residue-degree cap {max_m}"),
            Error::TreeFormat(msg) => write!(f, "tree file: {msg}"),
            Error::Unsupported(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
