//! Strong contraction and bounded geodesic image.

use super::projection::{projection_table, ProjectionTable};
use crate::metric::{DistanceMatrix, MetricGraph, Segment, Vertex};

/// Largest projection diameter of an open ball `{u : d(u, v) < d(v, seg)}`
/// centred at `v`.
fn ball_spread(d: &DistanceMatrix, t: &ProjectionTable, v: Vertex) -> u32 {
    let radius = t.dist(v);
    if radius == 0 {
        return 0;
    }
    let row = d.row(v);
    let (mut lo, mut hi) = (u32::MAX, 0);
    for u in 0..t.vertex_count() {
        if (row[u] as u32) < radius {
            lo = lo.min(t.lo(u));
            hi = hi.max(t.hi(u));
        }
    }
    hi - lo
}

/// Whether every open ball disjoint from the segment projects to a set of
/// diameter at most `c`.
pub fn is_contracting(d: &DistanceMatrix, seg: &Segment, c: u32) -> bool {
    let t = projection_table(d, seg);
    (0..d.dimension()).all(|v| ball_spread(d, &t, v) <= c)
}

/// Least `C` for which the segment is `C`-contracting.
pub fn min_contraction(d: &DistanceMatrix, seg: &Segment) -> u32 {
    let t = projection_table(d, seg);
    (0..d.dimension()).map(|v| ball_spread(d, &t, v)).max().unwrap_or(0)
}

/// A geodesic far from the segment with a wide projection, given by its
/// endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BgiViolation {
    pub u: Vertex,
    pub w: Vertex,
    pub gap: u32,
}

/// Finds a geodesic at distance at least `c` from the segment whose
/// projection has diameter more than `c`. Such a geodesic may be cut down
/// to the stretch between two vertices realising the projection's extreme
/// positions, so it suffices to look at pairs `u, w` of far vertices joined
/// by a geodesic of `g` that stays far.
pub fn bgi_violation(g: &MetricGraph, d: &DistanceMatrix, seg: &Segment, c: u32) -> Option<BgiViolation> {
    let t = projection_table(d, seg);
    bgi_violation_with(g, d, &t, c)
}

pub(crate) fn bgi_violation_with(
    g: &MetricGraph,
    d: &DistanceMatrix,
    t: &ProjectionTable,
    c: u32,
) -> Option<BgiViolation> {
    let n = g.vertex_count();
    let far: Vec<bool> = (0..n).map(|v| t.dist(v) >= c).collect();
    let mut seen = vec![u32::MAX; n];
    let mut queue = Vec::new();
    for u in 0..n {
        if !far[u] {
            continue;
        }
        let row = d.row(u);
        seen[u] = u as u32;
        queue.clear();
        queue.push(u);
        let mut head = 0;
        while head < queue.len() {
            let w = queue[head];
            head += 1;
            let lo = t.lo(u).min(t.lo(w));
            let hi = t.hi(u).max(t.hi(w));
            if hi - lo > c {
                return Some(BgiViolation { u, w, gap: hi - lo });
            }
            for &x in g.neighbor_slice(w) {
                let x = x as usize;
                if far[x] && seen[x] != u as u32 && row[x] == row[w] + 1 {
                    seen[x] = u as u32;
                    queue.push(x);
                }
            }
        }
    }
    None
}

pub fn has_bgi(g: &MetricGraph, d: &DistanceMatrix, seg: &Segment, c: u32) -> bool {
    bgi_violation(g, d, seg, c).is_none()
}

/// Least `C` with the `C`-bounded geodesic image property; at most the
/// segment length.
pub fn min_bgi(g: &MetricGraph, d: &DistanceMatrix, seg: &Segment) -> u32 {
    let t = projection_table(d, seg);
    let (mut lo, mut hi) = (0u32, seg.len() as u32);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if bgi_violation_with(g, d, &t, mid).is_none() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}
