use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate. Construction errors are reported at the
/// point the invalid value enters, so downstream operations can assume valid
/// inputs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("boundary set needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("angle {0} is not finite or lies outside [0, 2\u{3c0})")]
    AngleOutOfRange(f64),
    #[error("duplicate boundary angle {0}")]
    DuplicateAngle(f64),
    #[error("complementary arc starting at {start} has length {len} >= \u{3c0}")]
    ArcTooLong { start: f64, len: f64 },
    #[error("arc length {0} outside (0, \u{3c0})")]
    InvalidArcLength(f64),
    #[error("triangle base angle {phi} outside ({half_arc}, \u{3c0}/2) for arc of half-length {half_arc}")]
    InvalidBaseAngle { phi: f64, half_arc: f64 },
    #[error("theta0 must be positive, got {0}")]
    NonPositiveTheta(f64),
    #[error("clamped triangle angle {theta} fell below floor {floor} on arc of length {arc_len}")]
    ThetaBelowFloor { theta: f64, floor: f64, arc_len: f64 },
    #[error("need at least {min} samples per arc, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("probe circle collapsed at boundary angle {0}; domain geometry is inconsistent")]
    DegenerateProbe(f64),
    #[error("Vinogradov radius must exceed 1, got {0}")]
    InvalidVinogradovRadius(f64),
    #[error("Vinogradov aperture must lie in [0, \u{3c0}/2), got {0}")]
    InvalidVinogradovAperture(f64),

    #[error("tail_start {tail_start} needs at least {tail_start}+2 arcs, set has {arcs}")]
    TailStartOutOfRange { tail_start: usize, arcs: usize },
    #[error("ratio threshold beta must lie in (0, 1), got {0}")]
    InvalidBeta(f64),
    #[error("generator order K must be at least 1")]
    GeneratorOrderZero,
    #[error("generator order K={0} underflows double precision; maximum is {1}")]
    GeneratorOrderTooLarge(u32, u32),

    #[error("pole weight list has length {weights}, pole list has length {poles}")]
    PoleWeightMismatch { poles: usize, weights: usize },
    #[error("pole {0} does not lie outside the closed unit disk")]
    PoleInsideDisk(Complex64),
    #[error("Blaschke zero {0} does not lie inside the open unit disk")]
    ZeroOutsideDisk(Complex64),
    #[error("evaluation hit the pole at {0}")]
    PoleHit(Complex64),
    #[error("the singular inner function is not defined at z = 1")]
    SingularPointHit,
    #[error("model has a singularity at {point}, inside or on the requested region")]
    SingularityInRegion { point: Complex64 },
    #[error("model is not bounded on the requested domain")]
    UnboundedModel,

    #[error("no closed-form Taylor expansion for this variant; use the DFT path")]
    UnsupportedExpansion,
    #[error("sampling radius rho must lie in (0, 1), got {0}")]
    InvalidRadius(f64),
    #[error("DFT grid M={m} must be a power of two and at least N={n}")]
    InvalidDftGrid { m: usize, n: usize },
    #[error("sequence norm exponent p={0} must be >= 1 (or infinity)")]
    InvalidSequenceExponent(f64),

    #[error("truncation dimension {n} exceeds symbol length {len}")]
    TruncationTooLarge { n: usize, len: usize },
    #[error("operator norm exponent p={0} outside the supported range")]
    InvalidOperatorExponent(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("power iteration did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("grid size {got} too small, need at least {min}")]
    GridTooSmall { got: usize, min: usize },
    #[error("quadrature circle of radius {radius} at boundary angle {t} reaches within {clearance} of a singularity")]
    QuadratureRadiusTooLarge { t: f64, radius: f64, clearance: f64 },

    #[error("partition grid N={0} must be a power of two >= 8")]
    InvalidPartitionGrid(usize),
    #[error("boundary angles {a} and {b} collapse to the same frequency cut at N={n}")]
    CollidingCuts { a: f64, b: f64, n: usize },
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: usize, got: usize },
}
