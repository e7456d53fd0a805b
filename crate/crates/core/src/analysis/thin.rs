//! Deciding r-thinness.
//!
//! A segment from `p` to `q` with midpoint `c` fails to be r-thin exactly
//! when there are corners `x`, `y` with `x, p, q, y` in geodesic order and a
//! three-sided path `y → z → w → x` whose sides are geodesics missing the
//! closed ball `B(c, r)`. Whether a side misses the ball only depends on its
//! endpoints through the avoid relation, so the decision reduces to a
//! three-step reachability question from the corners beyond `q` to the
//! corners before `p`.
//!
//! [`ThinDecider`] answers it with two cheap certificates before the exact
//! search: a detour `q → z → p` found near the segment proves non-thinness,
//! and, for segments longer than the ball's diameter, `p` and `q` lying in
//! different components of the graph minus the ball proves thinness.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{Center, DistanceMatrix, HalfInt, MetricGraph, Segment, Vertex};

/// A segment abstracted to its endpoints, length and midpoint, together with
/// the radius to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ThinQuery {
    pub p: Vertex,
    pub q: Vertex,
    pub length: u32,
    pub midpoint: Center,
    pub radius: HalfInt,
}

impl ThinQuery {
    pub fn new(
        d: &DistanceMatrix,
        p: Vertex,
        q: Vertex,
        midpoint: Center,
        radius: HalfInt,
    ) -> Result<Self> {
        let length = d.get(p, q);
        match midpoint {
            Center::Vertex(c) => {
                let (a, b) = (d.get(p, c), d.get(c, q));
                if a + b != length || a.abs_diff(b) > 1 {
                    return Err(Error::input(format!(
                        "vertex {c} is not a midpoint of a geodesic from {p} to {q}"
                    )));
                }
            }
            Center::Edge(u, w) => {
                let ok = |u: Vertex, w: Vertex| {
                    d.get(u, w) == 1
                        && d.get(p, u) + 1 + d.get(w, q) == length
                        && d.get(p, u).abs_diff(d.get(w, q)) <= 1
                };
                if !ok(u, w) && !ok(w, u) {
                    return Err(Error::input(format!(
                        "edge {u}~{w} is not a midpoint of a geodesic from {p} to {q}"
                    )));
                }
            }
        }
        Ok(ThinQuery {
            p,
            q,
            length,
            midpoint,
            radius,
        })
    }

    pub fn for_segment(seg: &Segment, radius: HalfInt) -> Self {
        ThinQuery {
            p: seg.first(),
            q: seg.last(),
            length: seg.len() as u32,
            midpoint: seg.midpoint(),
            radius,
        }
    }
}

/// A vertex marking that is reset in O(1) by bumping a stamp.
struct Marks {
    stamp: u32,
    cells: Vec<u32>,
}

impl Marks {
    fn new(n: usize) -> Self {
        Marks {
            stamp: 0,
            cells: vec![0; n],
        }
    }

    fn reset(&mut self) {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.cells.fill(0);
            self.stamp = 1;
        }
    }

    #[inline]
    fn get(&self, v: usize) -> bool {
        self.cells[v] == self.stamp
    }

    #[inline]
    fn set(&mut self, v: usize) {
        self.cells[v] = self.stamp;
    }
}

/// Reusable scratch space for thinness decisions on one graph.
pub struct ThinDecider<'a> {
    g: &'a MetricGraph,
    d: &'a DistanceMatrix,
    ball: Marks,
    seen_a: Marks,
    seen_b: Marks,
    queue: Vec<u32>,
    queue_b: Vec<u32>,
    members: Vec<u32>,
    central: Option<(Vertex, Vertex)>,
}

impl<'a> ThinDecider<'a> {
    pub fn new(g: &'a MetricGraph, d: &'a DistanceMatrix) -> Self {
        let n = g.vertex_count();
        ThinDecider {
            g,
            d,
            ball: Marks::new(n),
            seen_a: Marks::new(n),
            seen_b: Marks::new(n),
            queue: Vec::new(),
            queue_b: Vec::new(),
            members: Vec::new(),
            central: None,
        }
    }

    pub fn graph(&self) -> &'a MetricGraph {
        self.g
    }

    pub fn distances(&self) -> &'a DistanceMatrix {
        self.d
    }

    #[inline]
    fn passable(&self, u: usize, w: usize) -> bool {
        if self.ball.get(w) {
            return false;
        }
        match self.central {
            Some((a, b)) => !((u == a && w == b) || (u == b && w == a)),
            None => true,
        }
    }

    /// Marks the ball members by a depth-limited search from the centre.
    fn mark_ball(&mut self, center: Center, radius: HalfInt) {
        self.ball.reset();
        self.members.clear();
        self.central = center.central_edge();
        let (seeds, depth) = match center {
            Center::Vertex(c) => ([c, c], Some(radius.floor())),
            Center::Edge(u, w) => (
                [u, w],
                radius.doubled().checked_sub(1).map(|r| r / 2),
            ),
        };
        let Some(depth) = depth else { return };
        let d = self.d;
        for s in seeds {
            if !self.ball.get(s) {
                self.ball.set(s);
                self.members.push(s as u32);
            }
        }
        let mut head = 0;
        while head < self.members.len() {
            let u = self.members[head] as usize;
            head += 1;
            if d.get(seeds[0], u).min(d.get(seeds[1], u)) == depth {
                continue;
            }
            for &w in self.g.neighbor_slice(u) {
                let w = w as usize;
                if !self.ball.get(w) {
                    self.ball.set(w);
                    self.members.push(w as u32);
                }
            }
        }
    }

    /// Exact r-thinness of the query.
    pub fn is_thin(&mut self, q: &ThinQuery) -> bool {
        self.decide(q.p, q.q, q.midpoint, q.radius)
    }

    /// The exact search alone, without the shortcut certificates.
    #[doc(hidden)]
    pub fn is_thin_exhaustive(&mut self, q: &ThinQuery) -> bool {
        self.mark_ball(q.midpoint, q.radius);
        !self.aligned_three_hop(q.p, q.q)
    }

    pub(crate) fn decide(&mut self, p: Vertex, q: Vertex, center: Center, radius: HalfInt) -> bool {
        self.mark_ball(center, radius);
        if !self.ball.get(p) && !self.ball.get(q) {
            let slack = 2 * radius.ceil() + 2;
            if self.detour_exists(p, q, slack) {
                return false;
            }
            // when the segment is longer than the ball's diameter, geodesics
            // from a corner to p (or from q to a corner) miss the ball, so
            // separating p from q separates every aligned pair of corners
            if self.d.get(p, q) > radius.doubled() && !self.connected_outside(p, q) {
                return true;
            }
        }
        if self.corner_shortcut(p, q, radius.ceil() + 1) {
            return false;
        }
        !self.aligned_three_hop(p, q)
    }

    /// Aligned corners `x`, `y` within `reach` of the segment ends and joined
    /// by a geodesic missing the ball: the degenerate quadrangle with `z = y`
    /// and `w = x` then misses it.
    fn corner_shortcut(&mut self, p: Vertex, q: Vertex, reach: u32) -> bool {
        const PER_SIDE: usize = 12;
        let d = self.d;
        let len = d.get(p, q);
        let (rp, rq) = (d.row(p), d.row(q));
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for v in 0..self.g.vertex_count() {
            if self.ball.get(v) {
                continue;
            }
            let (dp, dq) = (rp[v] as u32, rq[v] as u32);
            if dp <= reach && dq == dp + len && xs.len() < PER_SIDE {
                xs.push(v);
            } else if dq <= reach && dp == dq + len && ys.len() < PER_SIDE {
                ys.push(v);
            }
        }
        for &x in &xs {
            for &y in &ys {
                if d.get(x, y) == rp[x] as u32 + len + rq[y] as u32 && self.geodesic_avoids(x, y) {
                    return true;
                }
            }
        }
        false
    }

    /// Whether some geodesic from `x` to `y` misses the ball.
    fn geodesic_avoids(&mut self, x: Vertex, y: Vertex) -> bool {
        let d = self.d;
        let (rx, ry) = (d.row(x), d.row(y));
        let total = rx[y];
        self.seen_a.reset();
        self.seen_a.set(x);
        self.queue.clear();
        self.queue.push(x as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            if u == y {
                return true;
            }
            let next = rx[u] + 1;
            for &w in self.g.neighbor_slice(u) {
                let w = w as usize;
                if rx[w] == next && next + ry[w] == total && !self.seen_a.get(w) && self.passable(u, w) {
                    self.seen_a.set(w);
                    self.queue.push(w as u32);
                }
            }
        }
        false
    }

    /// Looks for `z` joined to both `p` and `q` by geodesics missing the
    /// ball, with `d(p,z) + d(z,q) <= d(p,q) + slack`.
    fn detour_exists(&mut self, p: Vertex, q: Vertex, slack: u32) -> bool {
        let d = self.d;
        let bound = d.get(p, q) + slack;
        let (rp, rq) = (d.row(p), d.row(q));
        self.seen_a.reset();
        self.seen_a.set(p);
        self.queue.clear();
        self.queue.push(p as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            let next = rp[u] + 1;
            for &w in self.g.neighbor_slice(u) {
                let w = w as usize;
                if rp[w] == next
                    && !self.seen_a.get(w)
                    && next as u32 + rq[w] as u32 <= bound
                    && self.passable(u, w)
                {
                    self.seen_a.set(w);
                    self.queue.push(w as u32);
                }
            }
        }
        self.seen_b.reset();
        self.seen_b.set(q);
        self.queue.clear();
        self.queue.push(q as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            if self.seen_a.get(u) {
                return true;
            }
            let next = rq[u] + 1;
            for &w in self.g.neighbor_slice(u) {
                let w = w as usize;
                if rq[w] == next
                    && !self.seen_b.get(w)
                    && next as u32 + rp[w] as u32 <= bound
                    && self.passable(u, w)
                {
                    self.seen_b.set(w);
                    self.queue.push(w as u32);
                }
            }
        }
        false
    }

    /// Whether some path from `p` to `q` misses the ball, by breadth-first
    /// search alternating from the smaller frontier.
    fn connected_outside(&mut self, p: Vertex, q: Vertex) -> bool {
        self.seen_a.reset();
        self.seen_b.reset();
        self.queue.clear();
        self.queue_b.clear();
        self.queue.push(p as u32);
        self.queue_b.push(q as u32);
        self.seen_a.set(p);
        self.seen_b.set(q);
        if p == q {
            return true;
        }
        let (mut ha, mut hb) = (0usize, 0usize);
        loop {
            let a_left = self.queue.len() - ha;
            let b_left = self.queue_b.len() - hb;
            if a_left == 0 || b_left == 0 {
                return false;
            }
            let from_a = a_left <= b_left;
            let u = if from_a {
                ha += 1;
                self.queue[ha - 1] as usize
            } else {
                hb += 1;
                self.queue_b[hb - 1] as usize
            };
            for &w in self.g.neighbor_slice(u) {
                let w = w as usize;
                if !self.passable(u, w) {
                    continue;
                }
                if from_a {
                    if self.seen_b.get(w) {
                        return true;
                    }
                    if !self.seen_a.get(w) {
                        self.seen_a.set(w);
                        self.queue.push(w as u32);
                    }
                } else {
                    if self.seen_a.get(w) {
                        return true;
                    }
                    if !self.seen_b.get(w) {
                        self.seen_b.set(w);
                        self.queue_b.push(w as u32);
                    }
                }
            }
        }
    }

    /// Component labels of the graph with the ball removed; ball members get
    /// `u32::MAX`.
    fn components_outside(&mut self) -> Vec<u32> {
        let n = self.g.vertex_count();
        let mut comp = vec![u32::MAX; n];
        let mut label = 0;
        for s in 0..n {
            if comp[s] != u32::MAX || self.ball.get(s) {
                continue;
            }
            comp[s] = label;
            self.queue.clear();
            self.queue.push(s as u32);
            let mut head = 0;
            while head < self.queue.len() {
                let u = self.queue[head] as usize;
                head += 1;
                for &w in self.g.neighbor_slice(u) {
                    let w = w as usize;
                    if comp[w] == u32::MAX && self.passable(u, w) {
                        comp[w] = label;
                        self.queue.push(w as u32);
                    }
                }
            }
            label += 1;
        }
        comp
    }

    /// Geodesic-DAG reach from `s` avoiding the ball, as a bit row.
    fn reach_row(&mut self, s: Vertex) -> Vec<u64> {
        let n = self.g.vertex_count();
        let mut row = vec![0u64; n.div_ceil(64)];
        if self.ball.get(s) {
            return row;
        }
        let rs = self.d.row(s);
        self.seen_a.reset();
        self.seen_a.set(s);
        self.queue.clear();
        self.queue.push(s as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            row[u / 64] |= 1 << (u % 64);
            let nxt = rs[u] + 1;
            for &w in self.g.neighbor_slice(u) {
                let w = w as usize;
                if rs[w] == nxt && !self.seen_a.get(w) && self.passable(u, w) {
                    self.seen_a.set(w);
                    self.queue.push(w as u32);
                }
            }
        }
        row
    }

    /// Exact search: corners `x`, `y` with `x, p, q, y` in geodesic order and
    /// `y` reaching `x` in three ball-avoiding geodesic hops.
    fn aligned_three_hop(&mut self, p: Vertex, q: Vertex) -> bool {
        let d = self.d;
        let n = self.g.vertex_count();
        let len = d.get(p, q);
        let (rp, rq) = (d.row(p), d.row(q));
        let comp = self.components_outside();
        let mut rows: Vec<Option<Vec<u64>>> = vec![None; n];
        for y in 0..n {
            if self.ball.get(y) || rp[y] as u32 != len + rq[y] as u32 {
                continue;
            }
            let ry = d.row(y);
            let dpy = rp[y] as u32;
            // hops never leave the component of y
            let partner = (0..n).any(|x| comp[x] == comp[y] && ry[x] as u32 == rp[x] as u32 + dpy);
            if !partner {
                continue;
            }
            let mut reach = self.reach_row(y);
            for _ in 0..2 {
                let mut next = reach.clone();
                for z in ones(&reach) {
                    let row = rows[z].get_or_insert_with(|| self.reach_row(z));
                    for (a, b) in next.iter_mut().zip(row.iter()) {
                        *a |= *b;
                    }
                }
                reach = next;
            }
            if ones(&reach).any(|x| ry[x] as u32 == rp[x] as u32 + dpy) {
                return true;
            }
        }
        false
    }
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

/// Exact r-thinness of a query on `g`.
pub fn is_thin(g: &MetricGraph, d: &DistanceMatrix, query: &ThinQuery) -> bool {
    ThinDecider::new(g, d).is_thin(query)
}

/// Least radius on the half-integer grid, up to `r_max`, at which the
/// segment is thin; `None` if it is not thin even at `r_max`.
pub fn min_thin_radius(
    g: &MetricGraph,
    d: &DistanceMatrix,
    p: Vertex,
    q: Vertex,
    midpoint: Center,
    r_max: HalfInt,
) -> Result<Option<HalfInt>> {
    ThinQuery::new(d, p, q, midpoint, r_max)?;
    let mut dec = ThinDecider::new(g, d);
    Ok(dec.min_radius(p, q, midpoint, r_max))
}

impl ThinDecider<'_> {
    /// Binary search over the half-integer grid; thinness is monotone in r.
    pub fn min_radius(&mut self, p: Vertex, q: Vertex, c: Center, r_max: HalfInt) -> Option<HalfInt> {
        if !self.decide(p, q, c, r_max) {
            return None;
        }
        let (mut lo, mut hi) = (0u32, r_max.doubled());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.decide(p, q, c, HalfInt::from_doubled(mid)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(HalfInt::from_doubled(lo))
    }
}
