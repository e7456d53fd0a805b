//! Contraction geometry on finite unit-edge graphs: thinness, quadrangle
//! contraction, strong contraction and bounded geodesic image deciders, the
//! contraction space obtained by coning off anti-contracting pairs, and
//! audits of its hyperbolic structure on example spaces.

pub mod analysis;
pub mod contraction;
pub mod error;
pub mod hyperbolic;
pub mod metric;
pub mod spaces;

pub use error::{Error, Result};
