//! The contraction space: the base graph with a unit interval glued between
//! every anti-contracting pair.
//!
//! Intervals are stored as direct edges. A shortest path between vertices
//! of the base crosses an interval end to end or not at all, so distances
//! between base vertices are those of the multigraph.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::gauge::{ContractionGauge, Mode};
use super::separation::SeparationEngine;
use crate::error::{Error, Result};
use crate::metric::graph::{is_blank_or_comment, parse_index, GraphBody};
use crate::metric::{all_pairs_distances, BitMatrix, DistanceMatrix, MetricGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatGraph {
    pub base: MetricGraph,
    /// Unordered pairs `(u, v)`, `u < v`.
    pub cone_edges: BTreeSet<(Vertex, Vertex)>,
    pub mode: Mode,
    pub gauge: ContractionGauge,
}

impl HatGraph {
    /// Base edges and cone edges merged, parallel connections collapsed.
    pub fn combined(&self) -> MetricGraph {
        let mut edges: Vec<(Vertex, Vertex)> = self.base.edges().collect();
        edges.extend(self.cone_edges.iter().copied());
        MetricGraph::new_dedup(self.base.vertex_count(), &edges).expect("supergraph of a connected graph")
    }

    /// Cone edges that are not already base edges.
    pub fn new_edge_count(&self) -> usize {
        self.cone_edges
            .iter()
            .filter(|&&(u, v)| !self.base.has_edge(u, v))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "hatgraph v1 {} {} {}",
            self.base.vertex_count(),
            self.mode,
            self.gauge
        );
        self.base.write_body(&mut out);
        for &(u, v) in &self.cone_edges {
            let _ = writeln!(out, "c {u} {v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (n, mode, gauge) = loop {
            let Some((no, line)) = lines.next() else {
                return Err(Error::parse(1, "missing `hatgraph v1 <n> <mode> <gauge>` header"));
            };
            if is_blank_or_comment(line) {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let ["hatgraph", "v1", n, mode, gauge] = toks.as_slice() else {
                return Err(Error::parse(no, "expected `hatgraph v1 <n> <mode> <gauge>`"));
            };
            let n: usize = n
                .parse()
                .map_err(|_| Error::parse(no, format!("bad vertex count `{n}`")))?;
            let mode: Mode = mode.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?;
            let gauge: ContractionGauge = gauge.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?;
            break (n, mode, gauge);
        };
        let mut body = GraphBody::new(n);
        let mut cone_edges = BTreeSet::new();
        for (no, line) in lines {
            if is_blank_or_comment(line) || body.accept(no, line)? {
                continue;
            }
            let mut toks = line.split_whitespace();
            if toks.next() != Some("c") {
                return Err(Error::parse(no, format!("unexpected line `{line}`")));
            }
            let u = parse_index(no, toks.next(), n)?;
            let v = parse_index(no, toks.next(), n)?;
            if toks.next().is_some() || u == v {
                return Err(Error::parse(no, "cone line needs two distinct indices"));
            }
            cone_edges.insert((u.min(v), u.max(v)));
        }
        let base = body.finish(text.lines().count().max(1))?;
        Ok(HatGraph {
            base,
            cone_edges,
            mode,
            gauge,
        })
    }
}

/// Builds the contraction space from a precomputed separation relation.
pub fn hat_from_separation(g: &MetricGraph, sep: &BitMatrix, k: ContractionGauge, mode: Mode) -> HatGraph {
    let n = g.vertex_count();
    let mut cone_edges = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            if !sep.get(x, y) {
                cone_edges.insert((x, y));
            }
        }
    }
    HatGraph {
        base: g.clone(),
        cone_edges,
        mode,
        gauge: k,
    }
}

pub fn build_hat(g: &MetricGraph, d: &DistanceMatrix, k: &ContractionGauge, mode: Mode) -> HatGraph {
    let sep = SeparationEngine::new(g, d, *k, mode).separation_matrix();
    hat_from_separation(g, &sep, *k, mode)
}

pub fn hat_distances(hat: &HatGraph) -> DistanceMatrix {
    all_pairs_distances(&hat.combined()).expect("supergraph of a connected graph")
}

/// Eccentricity of every vertex in the contraction space, by one BFS per
/// source; the full table is never held.
pub fn hat_eccentricities(hat: &HatGraph) -> Vec<u32> {
    eccentricities(&hat.combined())
}

pub fn hat_diameter(hat: &HatGraph) -> u32 {
    hat_eccentricities(hat).into_iter().max().unwrap_or(0)
}

pub(crate) fn eccentricities(g: &MetricGraph) -> Vec<u32> {
    let n = g.vertex_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::with_capacity(n)),
            |(dist, queue): &mut (Vec<u32>, Vec<u32>), s| {
                dist.fill(u32::MAX);
                queue.clear();
                dist[s] = 0;
                queue.push(s as u32);
                let mut head = 0;
                while head < queue.len() {
                    let u = queue[head] as usize;
                    head += 1;
                    for w in g.neighbors(u) {
                        if dist[w] == u32::MAX {
                            dist[w] = dist[u] + 1;
                            queue.push(w as u32);
                        }
                    }
                }
                dist[*queue.last().unwrap() as usize]
            },
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{make_grid, make_random_tree};

    #[test]
    fn tree_has_no_cone_edges() {
        for seed in 0..4 {
            let t = make_random_tree(25, seed).unwrap().graph;
            let d = all_pairs_distances(&t).unwrap();
            for mode in [Mode::Thin, Mode::Quad] {
                let hat = build_hat(&t, &d, &ContractionGauge::default(), mode);
                assert!(hat.cone_edges.is_empty());
                assert_eq!(hat_distances(&hat), d);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let g = make_grid(3, 3).unwrap().graph;
        let hat = HatGraph {
            base: g,
            cone_edges: [(0, 8), (2, 6)].into_iter().collect(),
            mode: Mode::Quad,
            gauge: ContractionGauge::partial(4, 10, 1).unwrap(),
        };
        let text = hat.to_text();
        assert!(text.starts_with("hatgraph v1 9 quad partial:4:10:1\n"));
        assert_eq!(HatGraph::from_text(&text).unwrap(), hat);
        assert!(HatGraph::from_text("hatgraph v1 2 thin affine:10:1\ne 0 1\nc 0 0\n").is_err());
        assert!(HatGraph::from_text("hatgraph v1 2 both affine:10:1\ne 0 1\n").is_err());
    }

    #[test]
    fn eccentricities_match_table() {
        let g = make_grid(5, 4).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        let hat = HatGraph {
            base: g,
            cone_edges: [(0, 19)].into_iter().collect(),
            mode: Mode::Thin,
            gauge: ContractionGauge::default(),
        };
        let dh = hat_distances(&hat);
        let ecc = hat_eccentricities(&hat);
        for v in 0..20 {
            assert_eq!(ecc[v], (0..20).map(|u| dh.get(u, v)).max().unwrap());
            for u in 0..20 {
                assert!(dh.get(u, v) <= d.get(u, v));
            }
        }
        assert_eq!(hat_diameter(&hat), dh.diameter());
    }
}
