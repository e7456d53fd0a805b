//! Gauges, separation witnesses and the contraction space built from the
//! anti-contracting pairs.

pub mod gauge;
pub mod hat;
pub mod separation;

pub use gauge::{gauge_eval, ContractionGauge, Mode};
pub use hat::{build_hat, hat_diameter, hat_distances, hat_eccentricities, hat_from_separation, HatGraph};
pub use separation::{
    anti_contracting_pairs, anti_contracting_pairs_among, is_separated, witness_table, SeparationEngine,
    SeparationWitness,
};
