//! Solver library for joint topological and directional constraint
//! networks over bounded plane regions.
//!
//! Topology is expressed in RCC8, direction in the rectangle algebra over
//! minimum bounding rectangles. The crate provides local propagation
//! (pairwise mutual restriction and its path-consistent fixpoint), a
//! complete decision procedure for the tractable fragment, a sound check
//! for general directional constraints, approximate solving to arbitrary
//! precision, and constructive region realization with exact geometric
//! verification.
//!
//! All interval and region arithmetic is exact over arbitrary-precision
//! rationals; every type is an immutable value after construction and safe
//! to share across threads.

pub mod algebra;
mod bits;
pub mod boxes;
pub mod error;
pub mod generate;
pub mod geom;
pub mod interaction;
pub mod interval;
pub mod network;
pub mod realize;
pub mod solver;
pub mod topology;

pub use error::{Error, Inconsistent};

/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;

/// Shorthand rational constructor.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
