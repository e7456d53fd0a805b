//! Finite, connected, unit-edge graphs and their text format.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Vertex ids are dense indices `0..vertex_count`.
pub type Vertex = usize;

/// A connected simple graph with unit edge lengths.
///
/// Adjacency lists are kept sorted so every traversal visits neighbours in
/// increasing id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    adjacency: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    labels: Option<Vec<String>>,
}

impl MetricGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and disconnected input.
    pub fn new(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        if vertex_count > u32::MAX as usize / 2 {
            return Err(Error::input("too many vertices"));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            norm.push((u.min(v) as u32, u.max(v) as u32));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let g = Self::from_sorted_unique(vertex_count, norm);
        g.check_connected()?;
        Ok(g)
    }

    /// Like [`MetricGraph::new`] but silently drops duplicate edges.
    pub fn new_dedup(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut norm: Vec<(Vertex, Vertex)> = edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        norm.sort_unstable();
        norm.dedup();
        Self::new(vertex_count, &norm)
    }

    fn from_sorted_unique(vertex_count: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        MetricGraph {
            adjacency,
            edges,
            labels: None,
        }
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(Error::Disconnected(0, v)),
            None => Ok(()),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertex_count() {
            return Err(Error::input(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count()
            )));
        }
        if labels.iter().any(|l| l.contains('\n')) {
            return Err(Error::input("labels must be single-line"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in sorted order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    /// Index of the edge `{u, v}` in [`MetricGraph::edges`] order.
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let key = (u.min(v) as u32, u.max(v) as u32);
        self.edges.binary_search(&key).ok()
    }

    pub fn edge_at(&self, index: usize) -> (Vertex, Vertex) {
        let (u, v) = self.edges[index];
        (u as usize, v as usize)
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        self.adjacency[v].iter().map(|&w| w as usize)
    }

    #[inline]
    pub(crate) fn neighbor_slice(&self, v: Vertex) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// Serialises into the `metricgraph v1` text format. Edges are written in
    /// sorted order, then labels in vertex order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "metricgraph v1 {}", self.vertex_count());
        self.write_body(&mut out);
        out
    }

    pub(crate) fn write_body(&self, out: &mut String) {
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {u} {v}");
        }
        if let Some(labels) = &self.labels {
            for (v, l) in labels.iter().enumerate() {
                let _ = writeln!(out, "l {v} {l}");
            }
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let n = loop {
            let Some((no, line)) = lines.next() else {
                return Err(Error::parse(1, "missing `metricgraph v1 <n>` header"));
            };
            if is_blank_or_comment(line) {
                continue;
            }
            break parse_graph_header(no, line)?;
        };
        let mut body = GraphBody::new(n);
        for (no, line) in lines {
            if is_blank_or_comment(line) {
                continue;
            }
            if !body.accept(no, line)? {
                return Err(Error::parse(no, format!("unexpected line `{line}`")));
            }
        }
        body.finish(text.lines().count().max(1))
    }
}

pub(crate) fn is_blank_or_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

pub(crate) fn parse_graph_header(no: usize, line: &str) -> Result<usize> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        ["metricgraph", "v1", n] => n
            .parse()
            .map_err(|_| Error::parse(no, format!("bad vertex count `{n}`"))),
        _ => Err(Error::parse(no, "expected `metricgraph v1 <n>`")),
    }
}

pub(crate) fn parse_index(no: usize, tok: Option<&str>, n: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(no, "missing vertex index"))?;
    let v: usize = tok
        .parse()
        .map_err(|_| Error::parse(no, format!("bad vertex index `{tok}`")))?;
    if v >= n {
        return Err(Error::parse(no, format!("vertex {v} out of range 0..{n}")));
    }
    Ok(v)
}

/// Accumulates `e` and `l` lines of a graph body.
pub(crate) struct GraphBody {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    labels: Vec<Option<String>>,
    any_label: bool,
    last_line: usize,
}

impl GraphBody {
    pub(crate) fn new(n: usize) -> Self {
        GraphBody {
            n,
            edges: Vec::new(),
            labels: vec![None; n],
            any_label: false,
            last_line: 0,
        }
    }

    /// Returns `false` when the line is not a graph-body line.
    pub(crate) fn accept(&mut self, no: usize, line: &str) -> Result<bool> {
        self.last_line = no;
        let mut toks = line.splitn(3, char::is_whitespace);
        match toks.next() {
            Some("e") => {
                let rest = line[1..].split_whitespace().collect::<Vec<_>>();
                if rest.len() != 2 {
                    return Err(Error::parse(no, "edge line needs exactly two indices"));
                }
                let u = parse_index(no, Some(rest[0]), self.n)?;
                let v = parse_index(no, Some(rest[1]), self.n)?;
                self.edges.push((u, v));
                Ok(true)
            }
            Some("l") => {
                let v = parse_index(no, toks.next(), self.n)?;
                let text = toks.next().unwrap_or("").to_string();
                self.labels[v] = Some(text);
                self.any_label = true;
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    pub(crate) fn finish(self, fallback_line: usize) -> Result<MetricGraph> {
        let at = self.last_line.max(fallback_line);
        let g = MetricGraph::new(self.n, &self.edges).map_err(|e| Error::parse(at, e.to_string()))?;
        if !self.any_label {
            return Ok(g);
        }
        let labels: Option<Vec<String>> = self.labels.into_iter().collect();
        match labels {
            Some(l) => g.with_labels(l),
            None => Err(Error::parse(at, "labels present for some vertices only")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(MetricGraph::new(3, &[(0, 0), (0, 1), (1, 2)]).is_err());
        assert!(MetricGraph::new(3, &[(0, 1), (1, 0), (1, 2)]).is_err());
        assert!(MetricGraph::new(3, &[(0, 1), (1, 3)]).is_err());
    }

    #[test]
    fn disconnected_names_a_pair() {
        let err = MetricGraph::new(4, &[(0, 1), (2, 3)]).unwrap_err();
        assert_eq!(err, Error::Disconnected(0, 2));
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let g = MetricGraph::new(4, &[(3, 2), (0, 1), (1, 2)])
            .unwrap()
            .with_labels(vec!["a".into(), "b c".into(), "".into(), "d".into()])
            .unwrap();
        let text = g.to_text();
        assert!(text.starts_with("metricgraph v1 4\ne 0 1\ne 1 2\ne 2 3\n"));
        let back = MetricGraph::from_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = MetricGraph::from_text("metricgraph v1 3\n# c\ne 0 1\ne 1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = MetricGraph::from_text("metricgraph v1 3\ne 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
