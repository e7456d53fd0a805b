//! Quadrangle contraction and the audit of its link to bounded geodesic
//! image.

use serde::Serialize;

use super::contraction::{bgi_violation_with, min_bgi, min_contraction};
use super::projection::projection_table;
use super::thin::ThinDecider;
use crate::metric::segment::midpoint_of;
use crate::metric::{DistanceMatrix, HalfInt, MetricGraph, Segment};

/// Length of the shortest subsegments that must be r-thin.
pub fn window_length(r: HalfInt) -> usize {
    // ceil(3r) with r = r2/2
    (3 * r.doubled()).div_ceil(2) as usize
}

/// The first window (by start position, shorter first) that is not r-thin,
/// as `(start, end)` positions.
///
/// Every subsegment of length at least `W = ⌈3r⌉` contains, around the
/// same midpoint, a subsegment of length `W` or `W + 1`; a quadrangle
/// containing the longer one contains the shorter, so thinness of these
/// windows decides all subsegments.
pub fn failing_window(
    dec: &mut ThinDecider<'_>,
    vertices: &[usize],
    r: HalfInt,
) -> Option<(usize, usize)> {
    let len = vertices.len() - 1;
    let w = window_length(r);
    for start in 0..=len {
        for span in [w, w + 1] {
            let end = start + span;
            if end > len {
                continue;
            }
            let run = &vertices[start..=end];
            if !dec.decide(run[0], run[span], midpoint_of(run), r) {
                return Some((start, end));
            }
        }
    }
    None
}

pub fn is_quadrangle_contracting(g: &MetricGraph, d: &DistanceMatrix, seg: &Segment, r: HalfInt) -> bool {
    let mut dec = ThinDecider::new(g, d);
    failing_window(&mut dec, seg.vertices(), r).is_none()
}

/// Least radius on the half-integer grid at which the segment is
/// quadrangle-contracting. Always exists: once `3r` exceeds the length there
/// is nothing to check.
pub fn min_quadrangle_radius(g: &MetricGraph, d: &DistanceMatrix, seg: &Segment) -> HalfInt {
    let mut dec = ThinDecider::new(g, d);
    let mut hi = 0u32;
    while window_length(HalfInt::from_doubled(hi)) <= seg.len() {
        hi += 1;
    }
    let mut lo = 0u32;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if failing_window(&mut dec, seg.vertices(), HalfInt::from_doubled(mid)).is_none() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    HalfInt::from_doubled(lo)
}

/// Constants of one segment and the check that quadrangle contraction at
/// `r` gives `(4r+1)`-bounded geodesic image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub quadrangle_radius: HalfInt,
    pub bgi_constant: u32,
    pub contraction_constant: u32,
    /// `⌈4r + 1⌉` at the quadrangle radius.
    pub implied_bgi: u32,
    pub implication_holds: bool,
}

pub fn equivalence_audit(g: &MetricGraph, d: &DistanceMatrix, seg: &Segment) -> EquivalenceReport {
    let r = min_quadrangle_radius(g, d, seg);
    let implied = 2 * r.doubled() + 1;
    let table = projection_table(d, seg);
    let holds = bgi_violation_with(g, d, &table, implied).is_none();
    EquivalenceReport {
        quadrangle_radius: r,
        bgi_constant: min_bgi(g, d, seg),
        contraction_constant: min_contraction(d, seg),
        implied_bgi: implied,
        implication_holds: holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{all_pairs_distances, some_geodesic};
    use crate::spaces::{make_free_product_ball, make_grid, make_random_tree, DEFAULT_GENERATION_CAP};

    #[test]
    fn windows() {
        assert_eq!(window_length(HalfInt::ZERO), 0);
        assert_eq!(window_length(HalfInt::HALF), 2);
        assert_eq!(window_length(HalfInt::from_int(1)), 3);
        assert_eq!(window_length(HalfInt::from_doubled(3)), 5);
    }

    #[test]
    fn tree_segments() {
        let inst = make_random_tree(30, 5).unwrap();
        let d = all_pairs_distances(&inst.graph).unwrap();
        let far = (0..30).max_by_key(|&v| d.get(0, v)).unwrap();
        let seg = some_geodesic(&inst.graph, &d, 0, far);
        assert!(is_quadrangle_contracting(&inst.graph, &d, &seg, HalfInt::ZERO));
        let rep = equivalence_audit(&inst.graph, &d, &seg);
        assert_eq!(rep.quadrangle_radius, HalfInt::ZERO);
        assert!(rep.implication_holds);
    }

    #[test]
    fn grid_interior_row_is_not_one_contracting() {
        let inst = make_grid(16, 7).unwrap();
        let d = all_pairs_distances(&inst.graph).unwrap();
        let vs: Vec<usize> = (2..=14).map(|i| i + 16 * 3).collect();
        let seg = Segment::new(&inst.graph, &d, vs).unwrap();
        assert_eq!(seg.len(), 12);
        assert!(!is_quadrangle_contracting(&inst.graph, &d, &seg, HalfInt::from_int(1)));
    }

    #[test]
    fn a_axis() {
        let inst = make_free_product_ball(4, DEFAULT_GENERATION_CAP).unwrap();
        let d = all_pairs_distances(&inst.graph).unwrap();
        let seg = Segment::new(&inst.graph, &d, inst.segment("a-axis").unwrap().to_vec()).unwrap();
        // points inside sheets are never 0-thin, every window of length two
        // or three along the axis is cut by its centre
        assert!(!is_quadrangle_contracting(&inst.graph, &d, &seg, HalfInt::ZERO));
        assert!(is_quadrangle_contracting(&inst.graph, &d, &seg, HalfInt::HALF));
        let rep = equivalence_audit(&inst.graph, &d, &seg);
        assert_eq!(rep.quadrangle_radius, HalfInt::HALF);
        assert!(rep.implication_holds);
    }
}
