//! Numerical workbench for coefficient multipliers of analytic functions on
//! the unit disk.
//!
//! The crate is organized around a handful of cooperating pieces:
//!
//! - [`geometry`]: closed sets on the boundary circle, their complementary
//!   arcs, and star-like domains built by erecting isosceles triangles over
//!   the chords of those arcs.
//! - [`lacunary`]: generators for lacunary-type boundary sets and the
//!   arc-length ratio reports used to screen them.
//! - [`models`]: closed-form analytic function models (polynomials, pole
//!   sums, finite Blaschke products, the atomic singular inner function)
//!   with exact evaluation and derivatives.
//! - [`taylor`]: Taylor coefficient extraction, either exact or through a
//!   sampled DFT with a recorded aliasing bound, plus sequence p-norms.
//! - [`mikhlin`]: the derivative-times-distance boundary check against the
//!   geometric bound coming from the inscribed-circle constant.
//! - [`norms`]: lower-triangular Toeplitz truncations of the coefficient
//!   multiplication operator and bracketed estimates of their p-norms.
//! - [`littlewood_paley`]: frequency partitions induced by a boundary set,
//!   block projections, and empirical quadratic-function constants.

pub mod error;
pub mod fft;
pub mod geometry;
pub mod lacunary;
pub mod littlewood_paley;
pub mod mikhlin;
pub mod models;
pub mod norms;
pub mod serde_c64;
pub mod taylor;

pub use error::{Error, Result};
pub use geometry::{Arc, ClosedCircleSet, StarDomain, Triangle};
pub use lacunary::RatioReport;
pub use littlewood_paley::{FrequencyPartition, LpConstantsReport};
pub use mikhlin::MikhlinReport;
pub use models::{AnalyticModel, Region, SupNormEstimate};
pub use norms::{NormEstimate, ToeplitzTruncation};
pub use taylor::{CoefficientSequence, CoefficientSource};

pub use num_complex::Complex64;
