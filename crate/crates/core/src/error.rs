use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("exponential overflow guard exceeded at z = {z} (Re z > {limit:e})")]
    OverflowGuard { z: Complex64, limit: f64 },
    #[error("non-finite sample at w = {at}")]
    NonFiniteSample { at: Complex64 },
    #[error("|f| = {modulus:e} below floor on contour at w = {at}")]
    ZeroOnContour { at: Complex64, modulus: f64 },
    #[error("winding integral {value} is {residual:e} away from an integer")]
    NonIntegerWinding { value: f64, residual: f64 },
    #[error("expected {expected} zero(s) inside contour, found {found}")]
    WrongZeroCount { expected: i64, found: i64 },
    #[error("fixed points coalesced: |z1 - z2| = {gap:e}")]
    CoalescedPair { gap: f64 },
    #[error("{z} is not a fixed point (residual {residual:e})")]
    NotAFixedPoint { z: Complex64, residual: f64 },
    #[error("sector violation: {0}")]
    SectorViolation(String),
    #[error("multiplier is exactly parabolic")]
    ParabolicInput,
    #[error("quadratic Taylor coefficient vanishes at the fixed point")]
    DegenerateQuadraticTerm,
    #[error("germ is not in normalized form w + w^2 + ...: leading coefficients ({c1}, {c2})")]
    NotNormalized { c1: Complex64, c2: Complex64 },
    #[error("{z} does not reach the petal")]
    NotInPetal { z: Complex64 },
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: String, iterations: usize },
    #[error("branch lost: {0}")]
    BranchLoss(String),
    #[error("multiplier {mu} is indifferent (|mu| = 1)")]
    IndifferentMultiplier { mu: Complex64 },
    #[error("horn map sample {w} falls outside the incoming chart")]
    HornDomainMiss { w: Complex64 },
    #[error("orbit of {z} does not escape")]
    NonEscaping { z: Complex64 },
    #[error("combinatorics not fixed: {0}")]
    CombNotFixed(String),
    #[error("ray sample {z} within {distance:e} of a critical point")]
    SingularHit { z: Complex64, distance: f64 },
    #[error("ray has no pair of samples one potential unit apart")]
    NoUnitPairs,
    #[error("samples do not settle: {0}")]
    Diverging(String),
    #[error("ray lost for parameter {a} at potential {t}: {reason}")]
    RayLost { a: Complex64, t: f64, reason: String },
    #[error("no zero of the defect inside the trust region around {seed}")]
    NoZeroInTrustRegion { seed: Complex64 },
    #[error("{count} zeros of the defect around {seed}")]
    MultipleZeros { seed: Complex64, count: i64 },
    #[error("continuation stalled at t = {t} (step {step:e})")]
    ContinuationStalled { t: f64, step: f64 },
    #[error("need at least {needed} samples, have {have}")]
    TooFewSamples { needed: usize, have: usize },
    #[error("fixed points swap along a loop around the base parameter (degree-2 cover)")]
    DoubleCover,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short machine-readable tag, used for JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OverflowGuard { .. } => "OverflowGuard",
            Error::NonFiniteSample { .. } => "NonFiniteSample",
            Error::ZeroOnContour { .. } => "ZeroOnContour",
            Error::NonIntegerWinding { .. } => "NonIntegerWinding",
            Error::WrongZeroCount { .. } => "WrongZeroCount",
            Error::CoalescedPair { .. } => "CoalescedPair",
            Error::NotAFixedPoint { .. } => "NotAFixedPoint",
            Error::SectorViolation(_) => "SectorViolation",
            Error::ParabolicInput => "ParabolicInput",
            Error::DegenerateQuadraticTerm => "DegenerateQuadraticTerm",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::NotInPetal { .. } => "NotInPetal",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BranchLoss(_) => "BranchLoss",
            Error::IndifferentMultiplier { .. } => "IndifferentMultiplier",
            Error::HornDomainMiss { .. } => "HornDomainMiss",
            Error::NonEscaping { .. } => "NonEscaping",
            Error::CombNotFixed(_) => "CombNotFixed",
            Error::SingularHit { .. } => "SingularHit",
            Error::NoUnitPairs => "NoUnitPairs",
            Error::Diverging(_) => "Diverging",
            Error::RayLost { .. } => "RayLost",
            Error::NoZeroInTrustRegion { .. } => "NoZeroInTrustRegion",
            Error::MultipleZeros { .. } => "MultipleZeros",
            Error::ContinuationStalled { .. } => "ContinuationStalled",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::DoubleCover => "DoubleCover",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
