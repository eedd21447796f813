//! Numerical laboratory for measures of noncompactness and semi-homogeneous
//! operators on discretized Lp spaces.
//!
//! The crate discretizes a finite measure space into cells, represents
//! bounded subsets of Lp by finite seeded samples, and provides:
//!
//! - witnessed estimators for the diameter, the Hausdorff measure chi, the
//!   separation measure beta, and the measure of nonequiabsolute continuity
//!   nu ([`estimators`]), with exhaustive oracles on small instances;
//! - an operator zoo of superposition, integral, and Hammerstein operators
//!   with combinators and analytic derivatives ([`operators`]);
//! - an analysis harness that estimates semi-homogeneity degrees, checks the
//!   spherical property, classifies condensing behaviour at a point and at
//!   infinity, and contrasts compact-like against noncompact-like linear
//!   operators ([`analysis`]);
//! - a batch experiment driver with TOML configs, JSON reports, CSV tables,
//!   and named presets ([`config`], [`runner`], [`report`], [`presets`]).
//!
//! Start with the `examples/` directory; each example exercises one of the
//! capabilities above end to end.

pub mod analysis;
pub mod config;
pub mod error;
pub mod estimators;
pub mod operators;
pub mod presets;
pub mod report;
pub mod runner;
pub mod sets;
pub mod space;

pub use error::{Error, Result};
