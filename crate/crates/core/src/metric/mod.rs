//! Graph representation, exact distances, geodesic intervals, balls and the
//! ball-avoidance relations that the thinness decider is built from.

pub mod ball;
pub mod bitmat;
pub mod distance;
pub mod embedding;
pub mod graph;
pub mod segment;

pub use ball::{avoid_relation, avoidance_distance, Ball, Center, HalfInt};
pub use bitmat::{relation_triple_compose, BitMatrix};
pub use distance::{
    all_pairs_distances, bfs_distances, hausdorff_distance, interval, some_geodesic,
    DistanceMatrix,
};
pub use embedding::{validate_convex_embedding, Distortion, EmbeddingReport};
pub use graph::{MetricGraph, Vertex};
pub use segment::Segment;
