//! Separation witnesses and the anti-contracting pair sweep.
//!
//! A pair `(x, y)` is separated when some geodesic from `x` to `y` has a
//! subsegment of length at least `K(r)` that is r-thin (thin mode) or
//! r-quadrangle-contracting (quad mode). The sweep fixes `x` and visits `y`
//! by increasing distance: if a witness exists with far end `q` short of
//! `y`, then a neighbour of `y` one step closer to `x` along a geodesic
//! through `q` is already separated by the same witness, so only witnesses
//! ending exactly at `y` need to be searched directly.

use std::collections::HashSet;
use std::sync::OnceLock;

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use serde::Serialize;

use super::gauge::{ContractionGauge, Mode};
use crate::analysis::quadrangle::window_length;
use crate::analysis::ThinDecider;
use crate::error::{Error, Result};
use crate::metric::segment::midpoint_of;
use crate::metric::{interval, BitMatrix, Center, DistanceMatrix, HalfInt, MetricGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub x: Vertex,
    pub y: Vertex,
    pub p: Vertex,
    pub q: Vertex,
    pub midpoint: Center,
    /// Least radius at which the subsegment qualifies.
    pub radius: HalfInt,
    /// The concrete subsegment, for quad mode where the choice of geodesic
    /// matters.
    pub path: Option<Vec<Vertex>>,
}

/// Memo key: endpoints in increasing order, midpoint code, doubled radius.
type Key = (u32, u32, u32, u32);

/// Shared state of a sweep: the inputs and the write-once thinness memo.
pub struct SeparationEngine<'a> {
    g: &'a MetricGraph,
    d: &'a DistanceMatrix,
    gauge: ContractionGauge,
    mode: Mode,
    memo: DashMap<Key, bool, FxBuildHasher>,
    quad: OnceLock<Vec<QuadEnds>>,
}

struct QuadEnds {
    len: u32,
    /// `ends[q]`: sorted far ends `p`.
    ends: Vec<Vec<u32>>,
}

/// Per-worker scratch.
pub struct Scratch<'a> {
    dec: ThinDecider<'a>,
    mark: Vec<u32>,
    stamp: u32,
    levels: Vec<Vec<u32>>,
    order: Vec<u32>,
}

impl<'a> SeparationEngine<'a> {
    pub fn new(g: &'a MetricGraph, d: &'a DistanceMatrix, gauge: ContractionGauge, mode: Mode) -> Self {
        SeparationEngine {
            g,
            d,
            gauge,
            mode,
            memo: DashMap::with_hasher(FxBuildHasher),
            quad: OnceLock::new(),
        }
    }

    pub fn gauge(&self) -> ContractionGauge {
        self.gauge
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn scratch(&self) -> Scratch<'a> {
        let n = self.g.vertex_count();
        Scratch {
            dec: ThinDecider::new(self.g, self.d),
            mark: vec![0; n],
            stamp: 0,
            levels: Vec::new(),
            order: Vec::with_capacity(n),
        }
    }

    fn center_code(&self, c: Center) -> u32 {
        match c.canonical() {
            Center::Vertex(v) => v as u32,
            Center::Edge(u, w) => {
                let e = self.g.edge_index(u, w).expect("midpoint edge is an edge");
                (self.g.vertex_count() + e) as u32
            }
        }
    }

    fn center_of(&self, code: u32) -> Center {
        let n = self.g.vertex_count();
        let code = code as usize;
        if code < n {
            Center::Vertex(code)
        } else {
            let (u, w) = self.g.edge_at(code - n);
            Center::Edge(u, w)
        }
    }

    /// Memoised thinness.
    fn thin(&self, dec: &mut ThinDecider<'_>, p: Vertex, q: Vertex, c: Center, r: HalfInt) -> bool {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        let key = (a as u32, b as u32, self.center_code(c), r.doubled());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let v = dec.decide(p, q, c, r);
        self.memo.insert(key, v);
        v
    }

    /// Memo contents as `(p, q, midpoint code, doubled radius << 1 | thin)`,
    /// sorted.
    pub fn export_memo(&self) -> Vec<[u32; 4]> {
        let mut out: Vec<[u32; 4]> = self
            .memo
            .iter()
            .map(|e| {
                let (p, q, c, r2) = *e.key();
                [p, q, c, (r2 << 1) | *e.value() as u32]
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Seeds the memo; records that do not fit this graph are skipped.
    pub fn import_memo(&self, records: &[[u32; 4]]) -> usize {
        let n = self.g.vertex_count() as u32;
        let codes = n + self.g.edge_count() as u32;
        let mut used = 0;
        for &[p, q, c, rt] in records {
            if p < n && q < n && c < codes && p <= q {
                self.memo.insert((p, q, c, rt >> 1), rt & 1 == 1);
                used += 1;
            }
        }
        used
    }

    /// Vertices of `I(x, y)` at each distance `k` from `y`.
    fn fill_levels(&self, s: &mut Scratch<'_>, x: Vertex, y: Vertex) {
        let d = self.d;
        let total = d.get(x, y) as usize;
        let rx = d.row(x);
        s.levels.resize_with(total + 1, Vec::new);
        s.levels[0].clear();
        s.levels[0].push(y as u32);
        for k in 1..=total {
            s.stamp = s.stamp.wrapping_add(1);
            if s.stamp == 0 {
                s.mark.fill(0);
                s.stamp = 1;
            }
            let (done, rest) = s.levels.split_at_mut(k);
            let next = &mut rest[0];
            next.clear();
            let want = (total - k) as u16;
            for &u in &done[k - 1] {
                for &w in self.g.neighbor_slice(u as usize) {
                    if rx[w as usize] == want && s.mark[w as usize] != s.stamp {
                        s.mark[w as usize] = s.stamp;
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
        }
    }

    /// Centres of geodesics from `p` to `q`, given the levels of an interval
    /// containing both with `q` at level 0 and `p` at level `len`.
    fn centers_in_levels(&self, levels: &[Vec<u32>], p: Vertex, len: usize, out: &mut Vec<Center>) {
        out.clear();
        let d = self.d;
        let rp = d.row(p);
        let ry = d.row(levels[0][0] as usize);
        if len.is_multiple_of(2) {
            for &c in &levels[len / 2] {
                if rp[c as usize] as usize == len / 2 {
                    out.push(Center::Vertex(c as usize));
                }
            }
        } else {
            let h = len / 2;
            for &u in &levels[h + 1] {
                if rp[u as usize] as usize != h {
                    continue;
                }
                for &w in self.g.neighbor_slice(u as usize) {
                    if ry[w as usize] as usize == h && rp[w as usize] as usize == h + 1 {
                        out.push(Center::Edge(u as usize, w as usize).canonical());
                    }
                }
            }
            out.sort_unstable_by_key(|&c| self.center_code(c));
            out.dedup();
        }
    }

    /// Whether a witness ends exactly at `y`, with `x` before it.
    fn direct(&self, s: &mut Scratch<'a>, x: Vertex, y: Vertex) -> bool {
        let total = self.d.get(x, y) as usize;
        match self.mode {
            Mode::Thin => {
                self.fill_levels(s, x, y);
                let mut centers = Vec::new();
                for len in 1..=total {
                    let Some(r) = self.gauge.max_radius(len as u32) else {
                        continue;
                    };
                    for i in 0..s.levels[len].len() {
                        let p = s.levels[len][i] as usize;
                        self.centers_in_levels(&s.levels, p, len, &mut centers);
                        for &c in &centers {
                            if self.thin(&mut s.dec, p, y, c, r) {
                                return true;
                            }
                        }
                    }
                }
                false
            }
            Mode::Quad => {
                let rx = self.d.row(x);
                self.quad_table().iter().any(|t| {
                    t.len as usize <= total
                        && t.ends[y]
                            .iter()
                            .any(|&p| rx[p as usize] as usize + t.len as usize == total)
                })
            }
        }
    }

    /// For each length `K(r)`, the pairs joined by an r-quadrangle-
    /// contracting geodesic of exactly that length. Whether a pair qualifies
    /// does not depend on the surrounding geodesic, so this is computed once.
    fn quad_table(&self) -> &[QuadEnds] {
        self.quad.get_or_init(|| {
            let n = self.g.vertex_count();
            let diam = self.d.diameter();
            self.quad_lengths(diam)
                .into_iter()
                .map(|(len, r)| {
                    let ends = (0..n)
                        .into_par_iter()
                        .map_init(|| self.scratch(), |s, q| self.quad_ends_from(&mut s.dec, q, len as usize, r))
                        .collect();
                    QuadEnds { len, ends }
                })
                .collect()
        })
    }

    /// Far ends of the r-quadrangle-contracting geodesics of length `len`
    /// starting at `q`, sorted.
    fn quad_ends_from(&self, dec: &mut ThinDecider<'_>, q: Vertex, len: usize, r: HalfInt) -> Vec<u32> {
        let w = window_length(r);
        let mut ends = Vec::new();
        let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
        let mut path = vec![q];
        self.quad_grow(dec, q, len, r, w, &mut path, &mut seen, &mut ends);
        ends.sort_unstable();
        ends.dedup();
        ends
    }

    #[allow(clippy::too_many_arguments)]
    fn quad_grow(
        &self,
        dec: &mut ThinDecider<'_>,
        q: Vertex,
        len: usize,
        r: HalfInt,
        w: usize,
        path: &mut Vec<Vertex>,
        seen: &mut HashSet<Vec<Vertex>>,
        ends: &mut Vec<u32>,
    ) {
        let depth = path.len() - 1;
        for span in [w, w + 1] {
            if span <= depth {
                let run = &path[depth - span..=depth];
                if !self.thin(dec, run[span], run[0], midpoint_of(run), r) {
                    return;
                }
            }
        }
        if depth == len {
            ends.push(path[depth] as u32);
            return;
        }
        // what can follow depends only on the last w + 1 vertices
        if !seen.insert(path[path.len().saturating_sub(w + 1)..].to_vec()) {
            return;
        }
        let u = path[depth];
        let rq = self.d.row(q);
        for &v in self.g.neighbor_slice(u) {
            let v = v as usize;
            if rq[v] as usize == depth + 1 {
                path.push(v);
                self.quad_grow(dec, q, len, r, w, path, seen, ends);
                path.pop();
            }
        }
    }

    /// The lengths `⌈K(r)⌉` up to `max_len`, each with the largest radius
    /// it admits. A quadrangle-contracting subsegment of length at least
    /// `K(r)` contains one of length exactly `K(r)`.
    fn quad_lengths(&self, max_len: u32) -> Vec<(u32, HalfInt)> {
        let mut out: Vec<(u32, HalfInt)> = Vec::new();
        let mut r2 = 0;
        while let Some(k) = self.gauge.eval(HalfInt::from_doubled(r2)) {
            if k > max_len {
                break;
            }
            let r = self.gauge.max_radius(k).expect("K(r) <= K(r)");
            if out.last().map(|&(l, _)| l) != Some(k) {
                out.push((k, r));
            }
            r2 += 1;
        }
        out
    }

    /// A path of length `len` ending at `y` and descending towards `x`
    /// whose windows of lengths `W` and `W + 1` are all r-thin; returned
    /// from its far end to `y`.
    fn quad_path(
        &self,
        dec: &mut ThinDecider<'_>,
        x: Vertex,
        y: Vertex,
        len: usize,
        r: HalfInt,
    ) -> Option<Vec<Vertex>> {
        let w = window_length(r);
        let mut path = vec![y];
        let mut failed: HashSet<(usize, Vec<Vertex>)> = HashSet::new();
        if self.quad_extend(dec, x, len, r, w, &mut path, &mut failed) {
            path.reverse();
            Some(path)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn quad_extend(
        &self,
        dec: &mut ThinDecider<'_>,
        x: Vertex,
        len: usize,
        r: HalfInt,
        w: usize,
        path: &mut Vec<Vertex>,
        failed: &mut HashSet<(usize, Vec<Vertex>)>,
    ) -> bool {
        let depth = path.len() - 1;
        // windows ending at the newest vertex
        for span in [w, w + 1] {
            if span <= depth {
                let run = &path[depth - span..=depth];
                if !self.thin(dec, run[span], run[0], midpoint_of(run), r) {
                    return false;
                }
            }
        }
        if depth == len {
            return true;
        }
        let tail = path[path.len().saturating_sub(w + 1)..].to_vec();
        if failed.contains(&(depth, tail.clone())) {
            return false;
        }
        let u = path[depth];
        let rx = self.d.row(x);
        let mut preds: Vec<Vertex> = self
            .g
            .neighbor_slice(u)
            .iter()
            .map(|&v| v as usize)
            .filter(|&v| rx[v] + 1 == rx[u])
            .collect();
        preds.sort_unstable();
        for v in preds {
            path.push(v);
            if self.quad_extend(dec, x, len, r, w, path, failed) {
                return true;
            }
            path.pop();
        }
        failed.insert((depth, tail));
        false
    }

    /// Separation of `x` from every vertex, as a bit row.
    pub fn row(&self, s: &mut Scratch<'a>, x: Vertex) -> Vec<u64> {
        let n = self.g.vertex_count();
        let rx = self.d.row(x);
        // vertices by distance from x
        let maxd = rx.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0usize; maxd + 2];
        for &v in rx {
            counts[v as usize + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        s.order.clear();
        s.order.resize(n, 0);
        for (v, &dv) in rx.iter().enumerate() {
            s.order[counts[dv as usize]] = v as u32;
            counts[dv as usize] += 1;
        }
        let mut sep = vec![0u64; n.div_ceil(64)];
        for i in 1..n {
            let y = s.order[i] as usize;
            let inherited = self.g.neighbor_slice(y).iter().any(|&v| {
                let v = v as usize;
                rx[v] + 1 == rx[y] && sep[v / 64] >> (v % 64) & 1 == 1
            });
            if inherited || self.direct(s, x, y) {
                sep[y / 64] |= 1 << (y % 64);
            }
        }
        sep
    }

    /// Separation relation restricted to the given rows, computed in
    /// parallel; row `i` of the result is `rows[i]`.
    pub fn rows(&self, rows: &[Vertex]) -> Vec<Vec<u64>> {
        if self.mode == Mode::Quad {
            self.quad_table();
        }
        rows.par_iter()
            .map_init(|| self.scratch(), |s, &x| self.row(s, x))
            .collect()
    }

    /// The full separation relation.
    pub fn separation_matrix(&self) -> BitMatrix {
        let n = self.g.vertex_count();
        let all: Vec<Vertex> = (0..n).collect();
        let rows = self.rows(&all);
        let mut m = BitMatrix::new(n);
        for (x, row) in rows.iter().enumerate() {
            m.row_words_mut(x).copy_from_slice(row);
        }
        m
    }

    /// The first witness in lexicographic `(p, q, midpoint)` order.
    pub fn witness(&self, x: Vertex, y: Vertex) -> Result<Option<SeparationWitness>> {
        if x == y {
            return Err(Error::input(format!("separation needs distinct points, got {x} twice")));
        }
        let d = self.d;
        let mut s = self.scratch();
        let total = d.get(x, y);
        let between = interval(d, x, y);
        let mut centers = Vec::new();
        for &p in &between {
            for &q in &between {
                let len = d.get(p, q);
                if p == q || d.get(x, p) + len + d.get(q, y) != total {
                    continue;
                }
                let Some(r) = self.gauge.max_radius(len) else {
                    continue;
                };
                match self.mode {
                    Mode::Thin => {
                        self.fill_levels(&mut s, p, q);
                        self.centers_in_levels(&s.levels, p, len as usize, &mut centers);
                        for &c in &centers {
                            if self.thin(&mut s.dec, p, q, c, r) {
                                let r_min = s.dec.min_radius(p, q, c, r).expect("thin at r");
                                return Ok(Some(SeparationWitness {
                                    x,
                                    y,
                                    p,
                                    q,
                                    midpoint: c,
                                    radius: r_min,
                                    path: None,
                                }));
                            }
                        }
                    }
                    Mode::Quad => {
                        if self.quad_path(&mut s.dec, p, q, len as usize, r).is_none() {
                            continue;
                        }
                        // least radius admitting such a path
                        for r2 in 0..=r.doubled() {
                            let rr = HalfInt::from_doubled(r2);
                            if let Some(path) = self.quad_path(&mut s.dec, p, q, len as usize, rr) {
                                return Ok(Some(SeparationWitness {
                                    x,
                                    y,
                                    p,
                                    q,
                                    midpoint: midpoint_of(&path).canonical(),
                                    radius: rr,
                                    path: Some(path),
                                }));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Least radius at which the subsegment from `p` to `q` with midpoint
    /// `c` is thin, up to `r_max`, through the memo.
    pub fn min_thin_radius(&self, p: Vertex, q: Vertex, c: Center, r_max: HalfInt) -> Option<HalfInt> {
        let mut s = self.scratch();
        (0..=r_max.doubled())
            .map(HalfInt::from_doubled)
            .find(|&r| self.thin(&mut s.dec, p, q, c, r))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    #[doc(hidden)]
    pub fn decode_center(&self, code: u32) -> Center {
        self.center_of(code)
    }
}

/// The first separation witness for `x ≠ y`, or `None` when the pair is
/// anti-contracting.
pub fn is_separated(
    g: &MetricGraph,
    d: &DistanceMatrix,
    x: Vertex,
    y: Vertex,
    k: &ContractionGauge,
    mode: Mode,
) -> Result<Option<SeparationWitness>> {
    SeparationEngine::new(g, d, *k, mode).witness(x, y)
}

/// Unordered pairs `(x, y)`, `x < y`, that no witness separates.
pub fn anti_contracting_pairs(
    g: &MetricGraph,
    d: &DistanceMatrix,
    k: &ContractionGauge,
    mode: Mode,
) -> Vec<(Vertex, Vertex)> {
    let sep = SeparationEngine::new(g, d, *k, mode).separation_matrix();
    let n = g.vertex_count();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if !sep.get(x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Anti-contracting pairs with both ends in `subset`.
pub fn anti_contracting_pairs_among(
    g: &MetricGraph,
    d: &DistanceMatrix,
    k: &ContractionGauge,
    mode: Mode,
    subset: &[Vertex],
) -> Vec<(Vertex, Vertex)> {
    let engine = SeparationEngine::new(g, d, *k, mode);
    let mut xs = subset.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let rows = engine.rows(&xs);
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            if rows[i][y / 64] >> (y % 64) & 1 == 0 {
                out.push((x, y));
            }
        }
    }
    out
}

/// Witnesses for the requested pairs, sharing one memo.
pub fn witness_table(
    g: &MetricGraph,
    d: &DistanceMatrix,
    k: &ContractionGauge,
    mode: Mode,
    pairs: &[(Vertex, Vertex)],
) -> Result<Vec<((Vertex, Vertex), Option<SeparationWitness>)>> {
    let engine = SeparationEngine::new(g, d, *k, mode);
    pairs
        .iter()
        .map(|&(x, y)| Ok(((x, y), engine.witness(x, y)?)))
        .collect()
}
