//! Closest-point projections onto a segment.

use serde::Serialize;

use crate::metric::{interval, DistanceMatrix, Segment, Vertex};

/// Nearest segment positions of every vertex.
#[derive(Debug, Clone)]
pub struct ProjectionTable {
    segment: Vec<Vertex>,
    dist: Vec<u32>,
    positions: Vec<Vec<u32>>,
}

impl ProjectionTable {
    pub fn dist(&self, v: Vertex) -> u32 {
        self.dist[v]
    }

    /// Positions along the segment of the nearest points, ascending.
    pub fn positions(&self, v: Vertex) -> &[u32] {
        &self.positions[v]
    }

    pub fn nearest(&self, v: Vertex) -> Vec<Vertex> {
        self.positions[v].iter().map(|&i| self.segment[i as usize]).collect()
    }

    pub fn lo(&self, v: Vertex) -> u32 {
        self.positions[v][0]
    }

    pub fn hi(&self, v: Vertex) -> u32 {
        *self.positions[v].last().unwrap()
    }

    /// Diameter of the projection of `v`; positions along a geodesic are at
    /// distance equal to their index gap.
    pub fn spread(&self, v: Vertex) -> u32 {
        self.hi(v) - self.lo(v)
    }

    pub fn segment(&self) -> &[Vertex] {
        &self.segment
    }

    pub fn vertex_count(&self) -> usize {
        self.dist.len()
    }
}

pub fn projection_table(d: &DistanceMatrix, seg: &Segment) -> ProjectionTable {
    let n = d.dimension();
    let vs = seg.vertices();
    let mut dist = vec![u32::MAX; n];
    let mut positions = vec![Vec::new(); n];
    for v in 0..n {
        for (i, &s) in vs.iter().enumerate() {
            let dv = d.get(v, s);
            if dv < dist[v] {
                dist[v] = dv;
                positions[v].clear();
            }
            if dv == dist[v] {
                positions[v].push(i as u32);
            }
        }
    }
    ProjectionTable {
        segment: vs.to_vec(),
        dist,
        positions,
    }
}

/// A point `z` of a geodesic from `x` to its projection `x'` that is closer
/// than half of `d(y, x')` to a segment point `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfDistViolation {
    pub x: Vertex,
    pub projection: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    pub d_yz: u32,
    pub d_y_projection: u32,
}

/// Checks `2·d(y, z) ≥ d(y, x')` for every sampled `x`, every nearest point
/// `x'`, every segment point `y` and every `z` between `x` and `x'`.
pub fn projection_halfdist_audit(
    d: &DistanceMatrix,
    seg: &Segment,
    sample: &[Vertex],
) -> Vec<HalfDistViolation> {
    let table = projection_table(d, seg);
    let mut out = Vec::new();
    for &x in sample {
        for xp in table.nearest(x) {
            let between = interval(d, x, xp);
            for &y in seg.vertices() {
                let dyx = d.get(y, xp);
                for &z in &between {
                    let dyz = d.get(y, z);
                    if 2 * dyz < dyx {
                        out.push(HalfDistViolation {
                            x,
                            projection: xp,
                            y,
                            z,
                            d_yz: dyz,
                            d_y_projection: dyx,
                        });
                    }
                }
            }
        }
    }
    out
}
