//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible truncation policies: {0}")]
    IncompatiblePolicies(String),

    #[error("series has non-unit constant term")]
    NonUnitConstantTerm,

    #[error("variable part of the series has non-positive valuation in (q, s)")]
    NonPositiveValuation,

    #[error("division by the zero series")]
    ZeroDivisor,

    #[error("divisor does not divide exactly: {0}")]
    NonDivisible(String),

    #[error("divisor support is not contained in the cone over its leading slice")]
    UnsupportedDivisorShape,

    #[error("coefficient is not rational: {0}")]
    NonRationalCoefficient(String),

    #[error("characteristic (N/2, N/2) is not allowed for even level N")]
    ForbiddenCharacteristic,

    #[error("matrix is not unimodular")]
    NonUnimodular,

    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),

    #[error("{0}")]
    Domain(String),

    #[error("character parity does not match the weight")]
    ParityMismatch,

    #[error("orbit closure exceeded the cap of {0} elements")]
    OrbitCapExceeded(usize),

    #[error("cusp expansion is not available for this form/cusp combination: {0}")]
    UnsupportedCuspExpansion(String),

    #[error("lift precondition violated: {0}")]
    LiftPrecondition(String),

    #[error("input generates a meromorphic product: {0}")]
    MeromorphicInput(String),

    #[error("integrality violation: {0}")]
    IntegralityViolation(String),

    #[error("truncation window too small: {0}")]
    WindowTooSmall(String),

    #[error("numeric evaluation outside the domain: {0}")]
    NumericDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
