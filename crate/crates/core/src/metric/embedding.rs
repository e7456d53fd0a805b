use serde::Serialize;

use super::distance::{all_pairs_distances, bfs_distances};
use super::graph::{MetricGraph, Vertex};
use crate::error::{Error, Result};

/// A pair whose distance changes under the embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distortion {
    pub u: Vertex,
    pub v: Vertex,
    pub sub_distance: u32,
    pub ambient_distance: u32,
}

/// Empty `distortions` means the map is an isometric embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub distortions: Vec<Distortion>,
}

impl EmbeddingReport {
    pub fn is_isometric(&self) -> bool {
        self.distortions.is_empty()
    }
}

/// Compares distances in `sub` with distances between the mapped vertices in
/// `ambient`. The map must be injective and send edges to edges.
pub fn validate_convex_embedding(
    sub: &MetricGraph,
    ambient: &MetricGraph,
    vertex_map: &[Vertex],
) -> Result<EmbeddingReport> {
    let n = sub.vertex_count();
    if vertex_map.len() != n {
        return Err(Error::input("vertex map must cover every vertex of the subgraph"));
    }
    let mut image_owner = vec![usize::MAX; ambient.vertex_count()];
    for (v, &img) in vertex_map.iter().enumerate() {
        if img >= ambient.vertex_count() {
            return Err(Error::input(format!("vertex {v} maps outside the ambient graph")));
        }
        if image_owner[img] != usize::MAX {
            return Err(Error::input(format!(
                "vertex map is not injective: {} and {v} both map to {img}",
                image_owner[img]
            )));
        }
        image_owner[img] = v;
    }
    for (u, v) in sub.edges() {
        if !ambient.has_edge(vertex_map[u], vertex_map[v]) {
            return Err(Error::input(format!("edge ({u}, {v}) is not mapped to an edge")));
        }
    }
    let ds = all_pairs_distances(sub)?;
    let mut distortions = Vec::new();
    for u in 0..n {
        let row = bfs_distances(ambient, vertex_map[u]);
        for v in (u + 1)..n {
            let amb = row[vertex_map[v]].expect("ambient graph is connected");
            let s = ds.get(u, v);
            if s != amb {
                distortions.push(Distortion {
                    u,
                    v,
                    sub_distance: s,
                    ambient_distance: amb,
                });
            }
        }
    }
    Ok(EmbeddingReport { distortions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::generators::{make_cycle, make_grid, make_path};

    #[test]
    fn identity_is_isometric() {
        let g = make_grid(3, 4).unwrap().graph;
        let map: Vec<usize> = (0..g.vertex_count()).collect();
        assert!(validate_convex_embedding(&g, &g, &map).unwrap().is_isometric());
    }

    #[test]
    fn chord_shortcut_is_reported() {
        let p = make_path(3).unwrap().graph;
        let c = make_cycle(3).unwrap().graph;
        let report = validate_convex_embedding(&p, &c, &[0, 1, 2]).unwrap();
        assert_eq!(
            report.distortions,
            vec![Distortion { u: 0, v: 2, sub_distance: 2, ambient_distance: 1 }]
        );
    }

    #[test]
    fn bad_maps_are_rejected() {
        let p = make_path(3).unwrap().graph;
        let c = make_cycle(4).unwrap().graph;
        assert!(validate_convex_embedding(&p, &c, &[0, 1, 1]).is_err());
        assert!(validate_convex_embedding(&p, &c, &[0, 2, 1]).is_err());
    }
}
