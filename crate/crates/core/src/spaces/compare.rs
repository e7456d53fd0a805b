//! The contraction space of a free-product ball against its coned-off
//! graph and its Bass-Serre tree.

use serde::Serialize;

use super::structure::{bass_serre_projection, cone_off, core_vertices};
use super::SpaceInstance;
use crate::contraction::{hat_distances, hat_from_separation, ContractionGauge, Mode, SeparationEngine};
use crate::error::{Error, Result};
use crate::hyperbolic::{fit_quasi_isometry, Quarters};
use crate::metric::{all_pairs_distances, HalfInt, Vertex};

/// Listed violations are truncated to this many.
const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeComparison {
    pub core_depth: u32,
    pub core_vertices: usize,
    pub intra_sheet_pairs: usize,
    /// Intra-sheet core pairs that received no cone edge.
    pub intra_sheet_separated: Vec<(Vertex, Vertex)>,
    /// Core pairs at tree distance at least `K(0) + 1`.
    pub far_pairs: usize,
    /// Far core pairs with no witness of radius zero.
    pub far_not_separated_at_zero: Vec<(Vertex, Vertex)>,
    /// Quasi-isometry constant between `d̂` and `d_T ∘ π` on the core.
    pub qi_hat_tree: Quarters,
    /// Quasi-isometry constant between `d̂` and the coned-off metric.
    pub qi_hat_cone: Quarters,
    /// `K(0) + 2`.
    pub qi_bound: u32,
    pub passed: bool,
}

/// Builds the contraction space of a free-product ball and checks, on the
/// ball of radius `core_depth` around the identity: intra-sheet pairs are
/// anti-contracting, pairs whose sheets are at least `K(0) + 1` apart in the
/// tree are separated by a witness of radius zero, and the projection to the
/// tree is a `(K(0) + 2)`-quasi-isometry.
pub fn cone_vs_hat_audit(
    inst: &SpaceInstance,
    gauge: &ContractionGauge,
    mode: Mode,
    core_depth: u32,
) -> Result<ConeComparison> {
    let bs = bass_serre_projection(inst)?;
    let g = &inst.graph;
    let k0 = gauge
        .eval(HalfInt::ZERO)
        .ok_or_else(|| Error::input("gauge is infinite at zero"))?;
    let d = all_pairs_distances(g)?;
    let sep = SeparationEngine::new(g, &d, *gauge, mode).separation_matrix();
    let hat = hat_from_separation(g, &sep, *gauge, mode);
    let hd = hat_distances(&hat);
    // witnesses of radius zero only
    let zero = ContractionGauge::partial(1, gauge.slope(), gauge.intercept())?;
    let sep0 = SeparationEngine::new(g, &d, zero, mode).separation_matrix();
    let dt = all_pairs_distances(&bs.tree)?;
    // the instance's peripherals are its sheets of size two or more
    let coned = cone_off(g, &inst.peripherals)?;
    let dc = all_pairs_distances(&coned)?;

    let core = core_vertices(inst, core_depth);
    let mut intra = 0;
    let mut intra_bad = Vec::new();
    let mut far = 0;
    let mut far_bad = Vec::new();
    let mut tree_pairs = Vec::new();
    let mut cone_pairs = Vec::new();
    for (i, &x) in core.iter().enumerate() {
        for &y in &core[i + 1..] {
            let t = dt.get(bs.map[x], bs.map[y]);
            if t == 0 {
                intra += 1;
                if sep.get(x, y) {
                    intra_bad.push((x, y));
                }
            }
            if t > k0 {
                far += 1;
                if !sep0.get(x, y) {
                    far_bad.push((x, y));
                }
            }
            tree_pairs.push((t, hd.get(x, y)));
            cone_pairs.push((dc.get(x, y), hd.get(x, y)));
        }
    }
    let qi_hat_tree = fit_quasi_isometry(&tree_pairs);
    let qi_hat_cone = fit_quasi_isometry(&cone_pairs);
    let qi_bound = k0 + 2;
    let passed = intra_bad.is_empty() && far_bad.is_empty() && qi_hat_tree <= Quarters(4 * qi_bound);
    intra_bad.truncate(MAX_LISTED);
    far_bad.truncate(MAX_LISTED);
    Ok(ConeComparison {
        core_depth,
        core_vertices: core.len(),
        intra_sheet_pairs: intra,
        intra_sheet_separated: intra_bad,
        far_pairs: far,
        far_not_separated_at_zero: far_bad,
        qi_hat_tree,
        qi_hat_cone,
        qi_bound,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{make_free_product_ball, make_grid, DEFAULT_GENERATION_CAP};

    #[test]
    fn radius_four_ball() {
        let inst = make_free_product_ball(4, DEFAULT_GENERATION_CAP).unwrap();
        let c = cone_vs_hat_audit(&inst, &ContractionGauge::default(), Mode::Thin, 2).unwrap();
        assert!(c.intra_sheet_pairs > 0 && c.far_pairs > 0);
        assert!(c.passed, "{c:?}");
    }

    #[test]
    fn needs_sheets() {
        let inst = make_grid(3, 3).unwrap();
        assert!(cone_vs_hat_audit(&inst, &ContractionGauge::default(), Mode::Thin, 1).is_err());
    }
}
