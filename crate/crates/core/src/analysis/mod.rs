//! Exact deciders for thinness, quadrangle contraction, strong contraction
//! and bounded geodesic image.

pub mod contraction;
pub mod projection;
pub mod quadrangle;
pub mod thin;

pub use contraction::{bgi_violation, has_bgi, is_contracting, min_bgi, min_contraction, BgiViolation};
pub use projection::{projection_halfdist_audit, projection_table, HalfDistViolation, ProjectionTable};
pub use quadrangle::{
    equivalence_audit, failing_window, is_quadrangle_contracting, min_quadrangle_radius,
    window_length, EquivalenceReport,
};
pub use thin::{is_thin, min_thin_radius, ThinDecider, ThinQuery};
