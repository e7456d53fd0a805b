//! Sheet quotients, coned-off graphs and ball cores.

use super::free_product::NormalForm;
use super::{PeripheralSystem, SpaceInstance};
use crate::error::{Error, Result};
use crate::metric::{bfs_distances, validate_convex_embedding, EmbeddingReport, MetricGraph, Vertex};

/// The Bass-Serre tree of a free-product space: one vertex per sheet, one
/// edge per `a`-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BassSerre {
    pub tree: MetricGraph,
    /// Tree vertex of each space vertex.
    pub map: Vec<Vertex>,
}

/// Quotient of the space by its sheets, checked to be a tree whose edges
/// are exactly the sheet-crossing `a`-edges.
pub fn bass_serre_projection(inst: &SpaceInstance) -> Result<BassSerre> {
    let sheets = inst
        .sheets
        .as_ref()
        .ok_or_else(|| Error::input("space has no sheet structure"))?;
    let g = &inst.graph;
    let count = sheets.iter().max().map_or(0, |m| m + 1);
    let forms: Option<Vec<NormalForm>> = g
        .labels()
        .map(|ls| ls.iter().map(|l| NormalForm::parse(l)).collect::<Result<Vec<_>>>())
        .transpose()
        .ok()
        .flatten();
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        let crossing = sheets[u] != sheets[v];
        if let Some(forms) = &forms {
            let step = forms[u].inverse().multiply(&forms[v]);
            let is_a = step.a_syllables() == 1 && step.word_length() == 1;
            if is_a != crossing {
                return Err(Error::input(format!(
                    "sheet invariant broken at edge {u}~{v}: a-edge {is_a}, crossing {crossing}"
                )));
            }
        }
        if crossing {
            edges.push((sheets[u], sheets[v]));
        }
    }
    if edges.len() + 1 != count {
        return Err(Error::input(format!(
            "sheet quotient is not a tree: {count} sheets, {} crossing edges",
            edges.len()
        )));
    }
    let tree = MetricGraph::new(count, &edges)
        .map_err(|e| Error::input(format!("sheet quotient is not a tree: {e}")))?;
    Ok(BassSerre {
        tree,
        map: sheets.clone(),
    })
}

/// `g` with every peripheral subset turned into a clique of unit edges.
pub fn cone_off(g: &MetricGraph, peripherals: &PeripheralSystem) -> Result<MetricGraph> {
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    for set in peripherals.sets() {
        if let Some(&v) = set.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::input(format!("peripheral vertex {v} out of range")));
        }
        for (i, &u) in set.iter().enumerate() {
            for &w in &set[i + 1..] {
                edges.push((u, w));
            }
        }
    }
    let coned = MetricGraph::new_dedup(g.vertex_count(), &edges)?;
    match g.labels() {
        Some(l) => coned.with_labels(l.to_vec()),
        None => Ok(coned),
    }
}

/// Vertices within `depth` of vertex 0 (the identity for group balls).
pub fn core_vertices(inst: &SpaceInstance, depth: u32) -> Vec<Vertex> {
    bfs_distances(&inst.graph, 0)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d <= depth))
        .map(|(v, _)| v)
        .collect()
}

/// Checks that the core of radius `depth` sits isometrically in `larger`,
/// matching vertices by label. Core distances are then the same in `inst`
/// and in `larger`, so boundary effects do not reach the core.
pub fn validate_core(inst: &SpaceInstance, depth: u32, larger: &SpaceInstance) -> Result<EmbeddingReport> {
    let core = core_vertices(inst, depth);
    let mut index = vec![usize::MAX; inst.graph.vertex_count()];
    for (i, &v) in core.iter().enumerate() {
        index[v] = i;
    }
    let edges: Vec<(Vertex, Vertex)> = inst
        .graph
        .edges()
        .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
        .map(|(u, v)| (index[u], index[v]))
        .collect();
    let sub = MetricGraph::new(core.len(), &edges)?;
    let by_label: std::collections::HashMap<&str, Vertex> = (0..larger.graph.vertex_count())
        .filter_map(|v| larger.graph.label(v).map(|l| (l, v)))
        .collect();
    let map = core
        .iter()
        .map(|&v| {
            let label = inst
                .graph
                .label(v)
                .ok_or_else(|| Error::input("core validation needs labelled vertices"))?;
            by_label
                .get(label)
                .copied()
                .ok_or_else(|| Error::input(format!("vertex {label} is missing from the larger space")))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_convex_embedding(&sub, &larger.graph, &map)
}
