//! Exact all-pairs distances and the geodesic helpers built on them.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::graph::{MetricGraph, Vertex};
use super::segment::Segment;
use crate::error::{Error, Result};

const UNREACHABLE_CELL: u16 = u16::MAX;

/// Square table of edge-count distances.
///
/// Stored as `u16`, so graphs must have fewer than 65 535 vertices (every
/// finite distance is then representable). Unreachable pairs hold a sentinel
/// and surface as `None` from [`DistanceMatrix::try_get`].
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    cells: Vec<u16>,
}

impl std::fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistanceMatrix").field("n", &self.n).finish()
    }
}

impl DistanceMatrix {
    /// Builds a matrix from rows of optional distances.
    pub fn from_rows(rows: Vec<Vec<Option<u32>>>) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::input("distance matrix must be square"));
            }
            for d in row {
                cells.push(match d {
                    Some(d) if *d < UNREACHABLE_CELL as u32 => *d as u16,
                    Some(d) => return Err(Error::input(format!("distance {d} too large"))),
                    None => UNREACHABLE_CELL,
                });
            }
        }
        Ok(DistanceMatrix { n, cells })
    }

    /// Row-major distances with `u32::MAX` for unreachable pairs, as
    /// produced by [`DistanceMatrix::to_flat`].
    pub fn from_flat(n: usize, flat: &[u32]) -> Result<Self> {
        if flat.len() != n * n {
            return Err(Error::input(format!("expected {} entries, got {}", n * n, flat.len())));
        }
        let cells = flat
            .iter()
            .map(|&d| match d {
                u32::MAX => Ok(UNREACHABLE_CELL),
                d if d < UNREACHABLE_CELL as u32 => Ok(d as u16),
                d => Err(Error::input(format!("distance {d} too large"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DistanceMatrix { n, cells })
    }

    pub fn to_flat(&self) -> Vec<u32> {
        self.cells
            .iter()
            .map(|&c| if c == UNREACHABLE_CELL { u32::MAX } else { c as u32 })
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Distance between `u` and `v`. Panics in debug builds if the pair is
    /// unreachable; use [`DistanceMatrix::try_get`] when that can happen.
    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        let c = self.cells[u * self.n + v];
        debug_assert!(c != UNREACHABLE_CELL, "unreachable pair ({u}, {v})");
        c as u32
    }

    #[inline]
    pub fn try_get(&self, u: Vertex, v: Vertex) -> Option<u32> {
        match self.cells[u * self.n + v] {
            UNREACHABLE_CELL => None,
            c => Some(c as u32),
        }
    }

    #[inline]
    pub(crate) fn row(&self, u: Vertex) -> &[u16] {
        &self.cells[u * self.n..(u + 1) * self.n]
    }

    /// Largest finite entry.
    pub fn diameter(&self) -> u32 {
        self.cells
            .iter()
            .filter(|&&c| c != UNREACHABLE_CELL)
            .copied()
            .max()
            .unwrap_or(0) as u32
    }

    /// `d(v, S)` for a nonempty vertex set.
    pub fn distance_to_set(&self, v: Vertex, set: &[Vertex]) -> u32 {
        set.iter().map(|&s| self.get(v, s)).min().expect("nonempty set")
    }

    /// Checks symmetry, the zero diagonal, the triangle inequality and
    /// `d(u, v) = 1` exactly on edges. Returns the first offending triple.
    pub fn check_metric(&self, g: &MetricGraph) -> std::result::Result<(), String> {
        let n = self.n;
        for u in 0..n {
            if self.get(u, u) != 0 {
                return Err(format!("d({u},{u}) != 0"));
            }
            for v in 0..n {
                if self.get(u, v) != self.get(v, u) {
                    return Err(format!("asymmetric at ({u},{v})"));
                }
                if (self.get(u, v) == 1) != g.has_edge(u, v) {
                    return Err(format!("d({u},{v}) = 1 disagrees with adjacency"));
                }
            }
        }
        for u in 0..n {
            for v in 0..n {
                let duv = self.get(u, v);
                for w in 0..n {
                    if duv > self.get(u, w) + self.get(w, v) {
                        return Err(format!("triangle inequality fails at ({u},{w},{v})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl DistanceMatrix {
    /// Whether this is exactly the distance table of `g`: zero diagonal,
    /// 1-Lipschitz along edges, and a neighbour one step closer for every
    /// other entry. By induction on distance these force the BFS values.
    pub fn is_exact_for(&self, g: &MetricGraph) -> bool {
        let n = self.n;
        n == g.vertex_count()
            && (0..n).into_par_iter().all(|u| {
                let row = self.row(u);
                (0..n).all(|v| {
                    let dv = row[v];
                    if dv == UNREACHABLE_CELL {
                        return false;
                    }
                    if v == u {
                        return dv == 0;
                    }
                    let mut down = false;
                    for w in g.neighbors(v) {
                        let dw = row[w];
                        if dw == UNREACHABLE_CELL || dw.abs_diff(dv) > 1 {
                            return false;
                        }
                        down |= dw + 1 == dv;
                    }
                    down
                })
            })
    }
}

/// Breadth-first distances from `source`; `None` where unreachable.
pub fn bfs_distances(g: &MetricGraph, source: Vertex) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn bfs_row(g: &MetricGraph, source: Vertex, out: &mut [u16], queue: &mut Vec<u32>) {
    out.fill(UNREACHABLE_CELL);
    out[source] = 0;
    queue.clear();
    queue.push(source as u32);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head] as usize;
        head += 1;
        let du = out[u] + 1;
        for &w in g.neighbor_slice(u) {
            let w = w as usize;
            if out[w] == UNREACHABLE_CELL {
                out[w] = du;
                queue.push(w as u32);
            }
        }
    }
}

/// Exact unit-weight shortest-path distances between all vertex pairs.
pub fn all_pairs_distances(g: &MetricGraph) -> Result<DistanceMatrix> {
    let n = g.vertex_count();
    if n >= UNREACHABLE_CELL as usize {
        return Err(Error::input(format!("{n} vertices exceed the distance table limit")));
    }
    let mut cells = vec![UNREACHABLE_CELL; n * n];
    cells
        .par_chunks_mut(n)
        .enumerate()
        .for_each_init(Vec::new, |queue, (u, row)| bfs_row(g, u, row, queue));
    if let Some(pos) = cells[..n].iter().position(|&c| c == UNREACHABLE_CELL) {
        return Err(Error::Disconnected(0, pos));
    }
    Ok(DistanceMatrix { n, cells })
}

/// `{z : d(x,z) + d(z,y) = d(x,y)}` in increasing id order.
pub fn interval(d: &DistanceMatrix, x: Vertex, y: Vertex) -> Vec<Vertex> {
    let dxy = d.get(x, y);
    let (rx, ry) = (d.row(x), d.row(y));
    (0..d.dimension())
        .filter(|&z| rx[z] as u32 + ry[z] as u32 == dxy)
        .collect()
}

/// A geodesic from `x` to `y`, stepping at each vertex to the lowest-id
/// neighbour one unit closer to `y`.
pub fn some_geodesic(g: &MetricGraph, d: &DistanceMatrix, x: Vertex, y: Vertex) -> Segment {
    let mut path = vec![x];
    let mut cur = x;
    while cur != y {
        let need = d.get(cur, y) - 1;
        cur = g
            .neighbors(cur)
            .find(|&w| d.get(w, y) == need)
            .expect("distance matrix matches graph");
        path.push(cur);
    }
    Segment::from_trusted(path)
}

/// Hausdorff distance between two nonempty vertex sets.
pub fn hausdorff_distance(d: &DistanceMatrix, s: &[Vertex], t: &[Vertex]) -> Result<u32> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::input("Hausdorff distance needs nonempty sets"));
    }
    let one_sided = |a: &[Vertex], b: &[Vertex]| {
        a.iter()
            .map(|&u| d.distance_to_set(u, b))
            .max()
            .unwrap()
    };
    Ok(one_sided(s, t).max(one_sided(t, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::generators::{make_cycle, make_grid, make_path};

    #[test]
    fn small_distances() {
        let p4 = make_path(4).unwrap().graph;
        assert_eq!(all_pairs_distances(&p4).unwrap().get(0, 3), 3);
        let c4 = make_cycle(4).unwrap().graph;
        assert_eq!(all_pairs_distances(&c4).unwrap().get(0, 2), 2);
        let grid = make_grid(5, 5).unwrap().graph;
        assert_eq!(all_pairs_distances(&grid).unwrap().get(0, 24), 8);
    }

    #[test]
    fn flat_round_trip() {
        let d = DistanceMatrix::from_rows(vec![
            vec![Some(0), Some(1), None],
            vec![Some(1), Some(0), None],
            vec![None, None, Some(0)],
        ])
        .unwrap();
        let flat = d.to_flat();
        assert_eq!(flat[2], u32::MAX);
        assert_eq!(DistanceMatrix::from_flat(3, &flat).unwrap(), d);
        assert!(DistanceMatrix::from_flat(2, &flat).is_err());
    }

    #[test]
    fn exactness_certificate() {
        let g = make_grid(4, 4).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        assert!(d.is_exact_for(&g));
        let mut flat = d.to_flat();
        // shrink one entry: still symmetric-looking but no longer exact
        flat[15] -= 1;
        assert!(!DistanceMatrix::from_flat(16, &flat).unwrap().is_exact_for(&g));
        assert!(!d.is_exact_for(&make_cycle(16).unwrap().graph));
    }

    #[test]
    fn metric_axioms_hold() {
        let g = make_grid(4, 3).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        d.check_metric(&g).unwrap();
    }

    #[test]
    fn intervals() {
        let grid = make_grid(3, 3).unwrap().graph;
        let d = all_pairs_distances(&grid).unwrap();
        // brute-force betweenness over all nine vertices
        let brute: Vec<usize> = (0..9)
            .filter(|&z| d.get(0, z) + d.get(z, 8) == d.get(0, 8))
            .collect();
        assert_eq!(brute.len(), 9);
        assert_eq!(interval(&d, 0, 8), brute);
        assert_eq!(interval(&d, 4, 4), vec![4]);
        let p = make_path(5).unwrap().graph;
        let dp = all_pairs_distances(&p).unwrap();
        assert_eq!(interval(&dp, 1, 3), vec![1, 2, 3]);
    }

    #[test]
    fn geodesic_tie_break() {
        let c4 = make_cycle(4).unwrap().graph;
        let d = all_pairs_distances(&c4).unwrap();
        // both 0-1-2 and 0-3-2 are geodesics
        assert_eq!(d.get(0, 1) + d.get(1, 2), 2);
        assert_eq!(d.get(0, 3) + d.get(3, 2), 2);
        assert_eq!(some_geodesic(&c4, &d, 0, 2).vertices(), &[0, 1, 2]);
        assert_eq!(some_geodesic(&c4, &d, 3, 3).vertices(), &[3]);
    }

    #[test]
    fn hausdorff() {
        let p4 = make_path(4).unwrap().graph;
        let d = all_pairs_distances(&p4).unwrap();
        assert_eq!(hausdorff_distance(&d, &[0], &[3]).unwrap(), 3);
        assert_eq!(hausdorff_distance(&d, &[1, 2], &[1, 2]).unwrap(), 0);
        assert!(hausdorff_distance(&d, &[], &[1]).is_err());
        let grid = make_grid(4, 4).unwrap().graph;
        let dg = all_pairs_distances(&grid).unwrap();
        let row0: Vec<usize> = (0..4).collect();
        let row1: Vec<usize> = (4..8).collect();
        assert_eq!(hausdorff_distance(&dg, &row0, &row1).unwrap(), 1);
    }
}
