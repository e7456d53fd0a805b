//! Built-in example spaces, their sheet and Bass-Serre structure, the
//! coned-off graph, and the space file format.

pub mod compare;
pub mod family;
pub mod free_product;
pub mod generators;
pub mod structure;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metric::graph::{is_blank_or_comment, parse_graph_header, parse_index, GraphBody};
use crate::metric::{MetricGraph, Vertex};

pub use compare::{cone_vs_hat_audit, ConeComparison};
pub use family::{make_family, Family, STRIP_SHEET_RADIUS};
pub use generators::{
    make_cycle, make_free_group_ball, make_free_product_ball, make_grid, make_path,
    make_random_tree, make_sheet_strip, make_special_geodesic, special_word,
    DEFAULT_GENERATION_CAP, DEFAULT_SWEEP_CAP,
};
pub use structure::{bass_serre_projection, cone_off, core_vertices, validate_core, BassSerre};

/// Subsets of the vertex range, each sorted and of size at least two.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PeripheralSystem {
    sets: Vec<Vec<Vertex>>,
}

impl PeripheralSystem {
    pub fn new(n: usize, sets: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if s.len() < 2 {
                return Err(Error::input("peripheral subsets need at least two vertices"));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::input(format!("peripheral vertex {v} out of range")));
            }
            out.push(s);
        }
        Ok(PeripheralSystem { sets: out })
    }

    pub fn sets(&self) -> &[Vec<Vertex>] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// A generated or loaded space with its optional structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceInstance {
    pub family: String,
    pub param: String,
    pub graph: MetricGraph,
    /// Sheet id per vertex, for free-product spaces.
    pub sheets: Option<Vec<usize>>,
    pub segments: BTreeMap<String, Vec<Vertex>>,
    pub peripherals: PeripheralSystem,
}

impl SpaceInstance {
    pub(crate) fn plain(family: &str, param: String, graph: MetricGraph) -> Self {
        SpaceInstance {
            family: family.to_string(),
            param,
            graph,
            sheets: None,
            segments: BTreeMap::new(),
            peripherals: PeripheralSystem::default(),
        }
    }

    pub fn segment(&self, name: &str) -> Option<&[Vertex]> {
        self.segments.get(name).map(Vec::as_slice)
    }

    /// Vertices grouped by sheet, sheets in id order.
    pub fn sheet_members(&self) -> Option<Vec<Vec<Vertex>>> {
        let sheets = self.sheets.as_ref()?;
        let count = sheets.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (v, &s) in sheets.iter().enumerate() {
            out[s].push(v);
        }
        Some(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("space v1 {} {}\n", self.family, self.param);
        out.push_str(&self.graph.to_text());
        if let Some(sheets) = &self.sheets {
            for (v, s) in sheets.iter().enumerate() {
                let _ = writeln!(out, "s {v} {s}");
            }
        }
        for (name, vs) in &self.segments {
            let _ = write!(out, "seg {name}");
            for v in vs {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        for set in self.peripherals.sets() {
            out.push_str("per");
            for v in set {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (family, param) = loop {
            let Some((no, line)) = lines.next() else {
                return Err(Error::parse(1, "missing space header"));
            };
            if is_blank_or_comment(line) {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["space", "v1", family, param] => break (family.to_string(), param.to_string()),
                _ => return Err(Error::parse(no, "expected `space v1 <family> <param>`")),
            }
        };
        let mut last = 1;
        let n = loop {
            let Some((no, line)) = lines.next() else {
                return Err(Error::parse(last + 1, "missing graph header"));
            };
            last = no;
            if !is_blank_or_comment(line) {
                break parse_graph_header(no, line)?;
            }
        };
        let mut body = GraphBody::new(n);
        let mut sheets: Vec<Option<usize>> = Vec::new();
        let mut segments = BTreeMap::new();
        let mut per = Vec::new();
        for (no, line) in lines {
            last = no;
            if is_blank_or_comment(line) || body.accept(no, line)? {
                continue;
            }
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("s") => {
                    let v = parse_index(no, toks.next(), n)?;
                    let s = toks
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(no, "bad sheet id"))?;
                    if sheets.is_empty() {
                        sheets = vec![None; n];
                    }
                    sheets[v] = Some(s);
                }
                Some("seg") => {
                    let name = toks
                        .next()
                        .ok_or_else(|| Error::parse(no, "segment needs a name"))?
                        .to_string();
                    let vs = toks
                        .map(|t| parse_index(no, Some(t), n))
                        .collect::<Result<Vec<_>>>()?;
                    segments.insert(name, vs);
                }
                Some("per") => {
                    let vs = toks
                        .map(|t| parse_index(no, Some(t), n))
                        .collect::<Result<Vec<_>>>()?;
                    per.push(vs);
                }
                _ => return Err(Error::parse(no, format!("unrecognised line {line:?}"))),
            }
        }
        let graph = body.finish(last)?;
        let sheets = if sheets.is_empty() {
            None
        } else {
            Some(
                sheets
                    .into_iter()
                    .enumerate()
                    .map(|(v, s)| s.ok_or_else(|| Error::parse(last, format!("vertex {v} has no sheet"))))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let peripherals = PeripheralSystem::new(n, per).map_err(|e| Error::parse(last, e.to_string()))?;
        Ok(SpaceInstance {
            family,
            param,
            graph,
            sheets,
            segments,
            peripherals,
        })
    }
}

pub fn save_space(inst: &SpaceInstance, path: &Path) -> Result<()> {
    std::fs::write(path, inst.to_text())
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

pub fn load_space(path: &Path) -> Result<SpaceInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    SpaceInstance::from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let grid = make_grid(3, 3).unwrap();
        assert_eq!(SpaceInstance::from_text(&grid.to_text()).unwrap(), grid);
        let zfp = make_free_product_ball(3, DEFAULT_GENERATION_CAP).unwrap();
        let text = zfp.to_text();
        let back = SpaceInstance::from_text(&text).unwrap();
        assert_eq!(back, zfp);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn truncated_file_reports_line() {
        let text = make_grid(3, 3).unwrap().to_text();
        let cut: Vec<&str> = text.lines().take(6).collect();
        let mut cut = cut.join("\n");
        cut.push_str("\ne 4");
        match SpaceInstance::from_text(&cut) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn peripheral_validation() {
        assert!(PeripheralSystem::new(3, vec![vec![0]]).is_err());
        assert!(PeripheralSystem::new(3, vec![vec![0, 5]]).is_err());
        let p = PeripheralSystem::new(3, vec![vec![2, 0]]).unwrap();
        assert_eq!(p.sets(), &[vec![0, 2]]);
    }
}
