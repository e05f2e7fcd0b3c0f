//! Exact computation of Witten's r-spin intersection numbers.
//!
//! Everything is computed in arbitrary-precision rational arithmetic; no
//! floating point is used anywhere. The computation proceeds on the
//! integrable-hierarchy side: the r-th root of the operator Q = D^r + Σ γ_i D^i
//! is manipulated as a formal pseudodifferential operator, the universal
//! differential polynomial W_r(z) is extracted from Res(Q^{1+1/r}), and an
//! all-genus recursion driven by W_r evaluates arbitrary correlators. Several
//! independent closed forms (gamma-function quotients, partition sums,
//! Landau-Ginzburg residues) cross-check the engine.

pub mod cache;
pub mod cli;
pub mod closedforms;
pub mod correlators;
pub mod diffalg;
pub mod mpoly;
pub mod psido;
pub mod scalar;
pub mod series;
pub mod smallphase;
pub mod wrpoly;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

/// The universal scalar: an arbitrary-precision rational, always in lowest
/// terms with a positive denominator.
pub type Rat = num_rational::BigRational;

/// Arbitrary-precision integer backing [`Rat`].
pub type Int = num_bigint::BigInt;

/// Commutative-ring scalar bound for the polynomial and series containers.
///
/// The containers ([`series::PowerSeries`], [`mpoly::MPoly`]) are written
/// against this trait rather than [`Rat`] directly, so they also work over
/// polynomial coefficient rings (series whose coefficients are themselves
/// multivariate polynomials are used for the symbolic identity checks).
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
{
}

/// Ring with exact division, for series operations that divide (reciprocal,
/// integration, square root). [`Rat`] is the only instantiation used by the
/// r-spin pipeline itself.
pub trait Field: Ring + Div<Output = Self> + FromPrimitive {}

impl<T> Field for T where T: Ring + Div<Output = Self> + FromPrimitive {}

/// Errors surfaced by the exact-arithmetic pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Gamma-function quotient with a pole in the numerator only; signals an
    /// inconsistent dimension constraint upstream.
    #[error("gamma pole: numerator argument {0} is a nonpositive integer with no cancelling denominator pole")]
    GammaPole(Rat),
    /// A coefficient at or below an operator's truncation floor was read.
    #[error("truncation floor violation: requested order {requested} but floor is {floor}")]
    FloorViolation { requested: i64, floor: i64 },
    /// The root was built with too few negative-order terms for the request.
    #[error("insufficient truncation depth: need {needed}, have {have}")]
    InsufficientDepth { needed: u32, have: u32 },
    /// Malformed CLI input.
    #[error("{0}")]
    Usage(String),
    /// Cache file problems.
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
