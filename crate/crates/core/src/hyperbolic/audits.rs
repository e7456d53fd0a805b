//! Finite checks of the quantitative statements about the contraction
//! space: thin triangles, closest points, quadrangle estimates and the
//! diameter of geodesic images.

use rayon::prelude::*;
use serde::Serialize;

use super::delta::{four_point_delta, sample_tuples, SampleSpec};
use crate::contraction::{ContractionGauge, HatGraph, Mode, SeparationEngine};
use crate::error::{Error, Result};
use crate::metric::{some_geodesic, DistanceMatrix, HalfInt, MetricGraph, Segment, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleViolation {
    pub triangle: [Vertex; 3],
    /// Index of the side, `0` for `[x, y]`, `1` for `[y, z]`, `2` for `[z, x]`.
    pub side: usize,
    pub vertex: Vertex,
    /// `d̂` from the vertex to the other two sides.
    pub distance: u32,
}

/// For each triangle, with the lowest-id geodesic on each side: every
/// vertex of a side lies within `d̂ <= 1` of the other two sides.
pub fn triangle_one_thin_audit(
    g: &MetricGraph,
    d: &DistanceMatrix,
    hat_d: &DistanceMatrix,
    triangles: &[[Vertex; 3]],
) -> Vec<TriangleViolation> {
    triangles
        .par_iter()
        .flat_map_iter(|&[x, y, z]| {
            let sides = [
                some_geodesic(g, d, x, y),
                some_geodesic(g, d, y, z),
                some_geodesic(g, d, z, x),
            ];
            let mut out = Vec::new();
            for i in 0..3 {
                let others: Vec<Vertex> = (0..3)
                    .filter(|&j| j != i)
                    .flat_map(|j| sides[j].vertices().iter().copied())
                    .collect();
                for &v in sides[i].vertices() {
                    let dist = others.iter().map(|&u| hat_d.get(v, u)).min().unwrap();
                    if dist > 1 {
                        out.push(TriangleViolation {
                            triangle: [x, y, z],
                            side: i,
                            vertex: v,
                            distance: dist,
                        });
                    }
                }
            }
            out
        })
        .collect()
}

/// `count` seeded vertex triples.
pub fn sample_triangles(n: usize, count: usize, seed: u64) -> Vec<[Vertex; 3]> {
    sample_tuples::<3>(n, count, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosestPointViolation {
    pub x: Vertex,
    /// Nearest segment vertex in the base metric.
    pub p: Vertex,
    /// Nearest segment vertex in the contraction space.
    pub q: Vertex,
    pub hat_distance: u32,
}

/// For each `x`: the nearest point `p` on the segment in `d` and `q` in
/// `d̂` (ties to the lower position) satisfy `d̂(p, q) < 17`. The estimate
/// needs `K(r) >= 10r + 1`.
pub fn closest_point_audit(
    d: &DistanceMatrix,
    hat_d: &DistanceMatrix,
    seg: &Segment,
    gauge: &ContractionGauge,
    vertices: &[Vertex],
) -> Result<Vec<ClosestPointViolation>> {
    if !gauge.dominates_default() {
        return Err(Error::input(format!(
            "closest point estimate needs K(r) >= 10r+1, gauge is {gauge}"
        )));
    }
    let vs = seg.vertices();
    let nearest = |m: &DistanceMatrix, x: Vertex| *vs.iter().min_by_key(|&&s| m.get(x, s)).unwrap();
    Ok(vertices
        .par_iter()
        .filter_map(|&x| {
            let (p, q) = (nearest(d, x), nearest(hat_d, x));
            let h = hat_d.get(p, q);
            (h >= 17).then_some(ClosestPointViolation {
                x,
                p,
                q,
                hat_distance: h,
            })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadrangleViolation {
    pub x: Vertex,
    pub y: Vertex,
    pub x2: Vertex,
    pub y2: Vertex,
    pub separator_radius: HalfInt,
    /// From the pinch point to `[x'', y'']`.
    pub distance: HalfInt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadrangleEstimateReport {
    /// Measured four-point constant used in place of the universal one.
    pub delta: HalfInt,
    /// `2R + 3δ + 18`, rounded up.
    pub k: u32,
    /// Least `d̂(x, y)` of a tested pair, `2k + 2`.
    pub threshold: u32,
    pub applicable: bool,
    pub checked: usize,
    pub violations: Vec<QuadrangleViolation>,
}

/// Pairs `x, y` far apart in `d̂` and pairs `x'', y''` within `R` of them:
/// the base geodesic `[x'', y'']` passes within `r0` of the pinch point
/// separating the points `x', y'` at `d̂`-distance `k` from the ends, `r0`
/// being the witness radius.
#[allow(clippy::too_many_arguments)]
pub fn quadrangle_estimate_audit(
    g: &MetricGraph,
    d: &DistanceMatrix,
    hat_d: &DistanceMatrix,
    gauge: &ContractionGauge,
    radius: u32,
    samples: usize,
    seed: u64,
    delta_spec: SampleSpec,
) -> Result<QuadrangleEstimateReport> {
    if !gauge.is_full() || !gauge.dominates_default() {
        return Err(Error::input(format!(
            "quadrangle estimates need a full gauge with K(r) >= 10r+1, gauge is {gauge}"
        )));
    }
    let delta = four_point_delta(hat_d, delta_spec).delta;
    let k = 2 * radius + (3 * delta.doubled()).div_ceil(2) + 18;
    let threshold = 2 * k + 2;
    let n = g.vertex_count();
    let far: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .filter(|&(x, y)| hat_d.get(x, y) >= threshold)
        .collect();
    let mut report = QuadrangleEstimateReport {
        delta,
        k,
        threshold,
        applicable: !far.is_empty(),
        checked: 0,
        violations: Vec::new(),
    };
    if far.is_empty() {
        return Ok(report);
    }
    let engine = SeparationEngine::new(g, d, *gauge, Mode::Thin);
    let picks = sample_tuples::<1>(far.len(), samples, seed);
    let near = |v: Vertex| -> Vec<Vertex> { (0..n).filter(|&u| hat_d.get(u, v) < radius).collect() };
    for [i] in picks {
        let (x, y) = far[i];
        let geo = some_geodesic(g, d, x, y);
        let vs = geo.vertices();
        let Some(a) = vs.iter().position(|&v| hat_d.get(x, v) >= k) else {
            continue;
        };
        let Some(b) = vs.iter().rposition(|&v| hat_d.get(v, y) >= k) else {
            continue;
        };
        if a >= b {
            continue;
        }
        let Some(w) = engine.witness(vs[a], vs[b])? else {
            continue;
        };
        let r0 = w.radius;
        for x2 in near(x) {
            for y2 in near(y) {
                if x2 == y2 {
                    continue;
                }
                let other = some_geodesic(g, d, x2, y2);
                // the pinch point itself is within r0 of [x'', y''], which
                // bounds the distance between the geodesics
                let ov = other.vertices();
                let through = w.midpoint.central_edge().is_some_and(|(a, b)| {
                    ov.windows(2).any(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a))
                });
                let dist = if through {
                    HalfInt::ZERO
                } else {
                    ov.iter()
                        .map(|&v| w.midpoint.doubled_distance(d, v))
                        .min()
                        .map(HalfInt::from_doubled)
                        .unwrap()
                };
                report.checked += 1;
                if dist > r0 {
                    report.violations.push(QuadrangleViolation {
                        x,
                        y,
                        x2,
                        y2,
                        separator_radius: r0,
                        distance: dist,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicImageReport {
    /// Largest `d̂`-Hausdorff distance between a base geodesic and a
    /// geodesic of the contraction space with the same ends.
    pub hausdorff: u32,
    pub pairs: usize,
    /// Pairs with `diam̂(γ) > d̂(x, y) + 2·hausdorff`.
    pub violations: Vec<(Vertex, Vertex)>,
}

/// Measures how far base geodesics are from geodesics of the contraction
/// space and checks the resulting bound on the `d̂`-diameter of base
/// geodesics.
pub fn geodesic_image_audit(
    g: &MetricGraph,
    d: &DistanceMatrix,
    hat: &HatGraph,
    hat_d: &DistanceMatrix,
    pairs: &[(Vertex, Vertex)],
) -> GeodesicImageReport {
    let hg = hat.combined();
    let rows: Vec<(u32, u32, u32)> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let base = some_geodesic(g, d, x, y);
            let hatg = some_geodesic(&hg, hat_d, x, y);
            let (bs, hs) = (base.vertices(), hatg.vertices());
            let one_way = |a: &[Vertex], b: &[Vertex]| {
                a.iter()
                    .map(|&u| b.iter().map(|&v| hat_d.get(u, v)).min().unwrap())
                    .max()
                    .unwrap()
            };
            let h = one_way(bs, hs).max(one_way(hs, bs));
            let diam = bs
                .iter()
                .flat_map(|&u| bs.iter().map(move |&v| hat_d.get(u, v)))
                .max()
                .unwrap();
            (h, diam, hat_d.get(x, y))
        })
        .collect();
    let hausdorff = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let violations = pairs
        .iter()
        .zip(&rows)
        .filter(|(_, &(_, diam, dxy))| diam > dxy + 2 * hausdorff)
        .map(|(&p, _)| p)
        .collect();
    GeodesicImageReport {
        hausdorff,
        pairs: pairs.len(),
        violations,
    }
}
