use serde::Serialize;

use super::ball::Center;
use super::distance::DistanceMatrix;
use super::graph::{MetricGraph, Vertex};
use crate::error::{Error, Result};

/// A geodesic realised as a vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    vertices: Vec<Vertex>,
}

impl Segment {
    /// Checks that consecutive vertices are adjacent and that the sequence
    /// realises the distance between its endpoints.
    pub fn new(g: &MetricGraph, d: &DistanceMatrix, vertices: Vec<Vertex>) -> Result<Self> {
        let Some(&first) = vertices.first() else {
            return Err(Error::input("segment needs at least one vertex"));
        };
        if let Some(&bad) = vertices.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::input(format!("segment vertex {bad} out of range")));
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(Error::input(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        let last = *vertices.last().unwrap();
        if d.get(first, last) as usize != vertices.len() - 1 {
            return Err(Error::input(format!(
                "not a geodesic: {} steps between vertices at distance {}",
                vertices.len() - 1,
                d.get(first, last)
            )));
        }
        Ok(Segment { vertices })
    }

    pub(crate) fn from_trusted(vertices: Vec<Vertex>) -> Self {
        Segment { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    /// Central vertex for even length, central edge for odd length.
    pub fn midpoint(&self) -> Center {
        midpoint_of(&self.vertices)
    }

    /// The sub-run between positions `from` and `to` (inclusive, `from <= to`).
    pub fn sub(&self, from: usize, to: usize) -> Segment {
        assert!(from <= to && to < self.vertices.len());
        Segment {
            vertices: self.vertices[from..=to].to_vec(),
        }
    }

    pub fn reversed(&self) -> Segment {
        let mut v = self.vertices.clone();
        v.reverse();
        Segment { vertices: v }
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }
}

/// Midpoint of a vertex run using the even/odd convention.
pub(crate) fn midpoint_of(run: &[Vertex]) -> Center {
    let len = run.len() - 1;
    if len.is_multiple_of(2) {
        Center::Vertex(run[len / 2])
    } else {
        Center::Edge(run[len / 2], run[len / 2 + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::all_pairs_distances;
    use crate::spaces::generators::make_cycle;

    #[test]
    fn validates_geodesics() {
        let g = make_cycle(6).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        assert!(Segment::new(&g, &d, vec![0, 1, 2, 3]).is_ok());
        assert!(Segment::new(&g, &d, vec![0, 1, 2, 3, 4]).is_err());
        assert!(Segment::new(&g, &d, vec![0, 2]).is_err());
        let s = Segment::new(&g, &d, vec![5, 0, 1, 2]).unwrap();
        assert_eq!(s.midpoint(), Center::Edge(0, 1));
        assert_eq!(s.sub(1, 3).midpoint(), Center::Vertex(1));
        assert_eq!(s.sub(2, 2).len(), 0);
    }
}
