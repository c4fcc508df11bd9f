//! Continuous K-frames on a discretized measure space.
//!
//! A frame is a finite family of samples `F(ω_i) ∈ ℂ^d` attached to atoms of
//! positive weight `μ_i`, so that every integral over `Ω` is a weighted sum.
//! The crate builds the analysis, synthesis and frame operators, classifies
//! frames against an operator `K`, constructs the canonical dual `K†F` of a
//! Parseval K-frame and checks the structural facts about duals (residual
//! operators, norm minimality, uniqueness, `L²`-independence transfer and the
//! orthogonal decomposition of synthesis coefficients) numerically.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`]: complex matrices, Jacobi SVD, pseudo-inverse, Loewner order,
//!   range inclusion and the Douglas factor;
//! * [`measure`]: the atoms and weights of `(Ω, μ)` and `L²(Ω)`;
//! * [`frame`]: sampled frames, operators, bounds, classification, generators;
//! * [`duality`]: canonical and alternative duals and their checks;
//! * [`rng`]: seeded, replayable random streams.

pub mod duality;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod measure;
pub mod rng;

pub use error::{Error, Result};
pub use frame::{KOperator, SampledFrame};
pub use linalg::{HVector, LinOperator, Scalar};
pub use measure::{L2Coefficients, MeasureSpace};
