//! Contraction-space diameters along a family of spaces.

use serde::Serialize;

use crate::contraction::{hat_diameter, hat_from_separation, ContractionGauge, Mode, SeparationEngine};
use crate::error::Result;
use crate::metric::all_pairs_distances;
use crate::spaces::{make_family, Family};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterRow {
    pub size: usize,
    pub vertices: usize,
    pub cone_edges: usize,
    pub base_diameter: u32,
    pub hat_diameter: u32,
}

pub fn diameter_scan(
    family: Family,
    sizes: &[usize],
    gauge: &ContractionGauge,
    mode: Mode,
    cap: usize,
) -> Result<Vec<DiameterRow>> {
    sizes
        .iter()
        .map(|&size| {
            let inst = make_family(family, size, cap)?;
            let d = all_pairs_distances(&inst.graph)?;
            let sep = SeparationEngine::new(&inst.graph, &d, *gauge, mode).separation_matrix();
            let hat = hat_from_separation(&inst.graph, &sep, *gauge, mode);
            Ok(DiameterRow {
                size,
                vertices: inst.graph.vertex_count(),
                cone_edges: hat.cone_edges.len(),
                base_diameter: d.diameter(),
                hat_diameter: hat_diameter(&hat),
            })
        })
        .collect()
}
