//! Half-integer radii, ball centres (vertices or edge midpoints) and the
//! relations recording which pairs can be joined by a geodesic missing a ball.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use super::bitmat::BitMatrix;
use super::distance::DistanceMatrix;
use super::graph::{MetricGraph, Vertex};

/// A nonnegative multiple of one half, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(u32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_doubled(doubled: u32) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(value: u32) -> Self {
        HalfInt(value * 2)
    }

    pub const fn doubled(self) -> u32 {
        self.0
    }

    /// Largest integer not above the value.
    pub const fn floor(self) -> u32 {
        self.0 / 2
    }

    /// Smallest integer not below the value.
    pub const fn ceil(self) -> u32 {
        self.0.div_ceil(2)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Next grid point.
    pub const fn step(self) -> Self {
        HalfInt(self.0 + 1)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

/// Midpoint of a segment: a vertex, or the midpoint of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Center {
    Vertex(Vertex),
    Edge(Vertex, Vertex),
}

impl Center {
    /// Same centre with edge endpoints in increasing order.
    pub fn canonical(self) -> Center {
        match self {
            Center::Edge(u, w) if u > w => Center::Edge(w, u),
            c => c,
        }
    }

    /// Doubled distance from the centre to vertex `v`.
    #[inline]
    pub fn doubled_distance(self, d: &DistanceMatrix, v: Vertex) -> u32 {
        match self {
            Center::Vertex(c) => 2 * d.get(c, v),
            Center::Edge(u, w) => 2 * d.get(u, v).min(d.get(w, v)) + 1,
        }
    }

    /// The edge whose interior contains the centre, if any.
    pub fn central_edge(self) -> Option<(Vertex, Vertex)> {
        match self {
            Center::Vertex(_) => None,
            Center::Edge(u, w) => Some((u, w)),
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Vertex(v) => write!(f, "{v}"),
            Center::Edge(u, w) => write!(f, "{u}~{w}"),
        }
    }
}

/// Closed ball around a [`Center`], resolved to its vertex members.
///
/// For an edge centre the ball also contains the whole interior point at
/// distance zero, so a path meets the ball whenever it visits a member or
/// traverses the central edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    center: Center,
    radius: HalfInt,
    members: Vec<Vertex>,
    is_member: Vec<bool>,
}

impl Ball {
    pub fn new(d: &DistanceMatrix, center: Center, radius: HalfInt) -> Self {
        let n = d.dimension();
        let is_member: Vec<bool> = (0..n)
            .map(|v| center.doubled_distance(d, v) <= radius.doubled())
            .collect();
        let members = (0..n).filter(|&v| is_member[v]).collect();
        Ball {
            center,
            radius,
            members,
            is_member,
        }
    }

    pub fn center(&self) -> Center {
        self.center
    }

    pub fn radius(&self) -> HalfInt {
        self.radius
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.is_member[v]
    }

    /// Whether traversing edge `{a, b}` meets the ball (beyond its endpoints).
    #[inline]
    pub fn blocks_edge(&self, a: Vertex, b: Vertex) -> bool {
        match self.center {
            Center::Edge(u, w) => (a == u && b == w) || (a == w && b == u),
            Center::Vertex(_) => false,
        }
    }
}

/// Shortest-path distance from `a` to `b` in the subgraph induced on the
/// vertices outside `forbidden`; `None` when unreachable (including when an
/// endpoint is itself forbidden).
pub fn avoidance_distance(
    g: &MetricGraph,
    forbidden: &[Vertex],
    a: Vertex,
    b: Vertex,
) -> Option<u32> {
    let mut blocked = vec![false; g.vertex_count()];
    for &f in forbidden {
        blocked[f] = true;
    }
    if blocked[a] || blocked[b] {
        return None;
    }
    let mut dist = vec![u32::MAX; g.vertex_count()];
    dist[a] = 0;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            return Some(dist[u]);
        }
        for w in g.neighbors(u) {
            if !blocked[w] && dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// `A(a, b)` holds when both vertices lie outside the ball and some geodesic
/// of `g` from `a` to `b` misses the ball entirely. The diagonal is set
/// exactly on vertices outside the ball.
pub fn avoid_relation(g: &MetricGraph, d: &DistanceMatrix, ball: &Ball) -> BitMatrix {
    let n = g.vertex_count();
    let mut out = BitMatrix::new(n);
    let mut seen = vec![false; n];
    let mut queue = Vec::with_capacity(n);
    for a in 0..n {
        if ball.contains(a) {
            continue;
        }
        seen.fill(false);
        seen[a] = true;
        queue.clear();
        queue.push(a);
        let mut head = 0;
        let row = d.row(a);
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            out.set(a, u, true);
            let next = row[u] + 1;
            for w in g.neighbors(u) {
                if row[w] == next && !seen[w] && !ball.contains(w) && !ball.blocks_edge(u, w) {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::all_pairs_distances;
    use crate::spaces::generators::{make_cycle, make_grid, make_path};

    #[test]
    fn halfint_arith() {
        let r = HalfInt::from_doubled(3);
        assert_eq!(r.to_string(), "3/2");
        assert_eq!(r.floor(), 1);
        assert_eq!(r.ceil(), 2);
        assert_eq!(r + HalfInt::HALF, HalfInt::from_int(2));
        assert!(HalfInt::from_int(1) < r);
    }

    #[test]
    fn edge_centred_ball() {
        let g = make_path(6).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        let b = Ball::new(&d, Center::Edge(2, 3), HalfInt::ZERO);
        assert!(b.members().is_empty());
        assert!(b.blocks_edge(3, 2));
        let b = Ball::new(&d, Center::Edge(2, 3), HalfInt::from_doubled(3));
        assert_eq!(b.members(), &[1, 2, 3, 4]);
    }

    #[test]
    fn avoidance() {
        let p5 = make_path(5).unwrap().graph;
        assert_eq!(avoidance_distance(&p5, &[2], 0, 4), None);
        let c4 = make_cycle(4).unwrap().graph;
        assert_eq!(avoidance_distance(&c4, &[1], 0, 2), Some(2));
        let grid = make_grid(5, 5).unwrap().graph;
        assert_eq!(avoidance_distance(&grid, &[12], 0, 24), Some(8));
        assert_eq!(avoidance_distance(&grid, &[], 3, 21), Some(6));
    }

    #[test]
    fn avoid_relation_examples() {
        let p5 = make_path(5).unwrap().graph;
        let d = all_pairs_distances(&p5).unwrap();
        let a = avoid_relation(&p5, &d, &Ball::new(&d, Center::Vertex(2), HalfInt::ZERO));
        assert!(!a.get(0, 4));
        assert!(a.get(0, 1) && !a.get(2, 2) && a.get(3, 3));

        let c4 = make_cycle(4).unwrap().graph;
        let d = all_pairs_distances(&c4).unwrap();
        let a = avoid_relation(&c4, &d, &Ball::new(&d, Center::Vertex(1), HalfInt::ZERO));
        assert!(a.get(0, 2));
        assert!(a.is_symmetric());

        // 7x7 grid, radius-1 ball at the centre (3,3): (3,0)..(3,6) must bend
        let grid = make_grid(7, 7).unwrap().graph;
        let d = all_pairs_distances(&grid).unwrap();
        let ball = Ball::new(&d, Center::Vertex(24), HalfInt::from_int(1));
        let a = avoid_relation(&grid, &d, &ball);
        // (0,3) and (6,3): distance 6 along the middle row; a geodesic must
        // stay in that row, so every one crosses the ball
        assert!(!a.get(21, 27));
        // (1,1)->(5,3): distance 6, a staircase passes below the ball
        let (u, v) = (7 + 1, 3 * 7 + 5);
        assert_eq!(d.get(u, v), 6);
        assert!(a.get(u, v));
        assert_eq!(avoidance_distance(&grid, ball.members(), u, v), Some(6));
        // (1,2)->(5,4) must cross column 3 inside the ball
        assert!(!a.get(2 * 7 + 1, 4 * 7 + 5));
    }
}
