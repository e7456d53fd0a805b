//! Named families of built-in spaces, indexed by one size parameter.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::generators::{
    make_cycle, make_free_group_ball, make_free_product_ball, make_grid, make_path, make_random_tree,
    make_sheet_strip,
};
use super::SpaceInstance;
use crate::error::{Error, Result};

/// Sheet radius of the strip family.
pub const STRIP_SHEET_RADIUS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Path,
    Cycle,
    /// Square grids, size is the side.
    Grid,
    /// Random recursive trees, size is the vertex count.
    Tree { seed: u64 },
    /// Rank-two free group balls, size is the radius.
    FreeGroup,
    /// Balls in the free product of `Z` and `Z²`, size is the radius.
    Zfp,
    /// Sheets around the special geodesic, size is the budget.
    Strip,
}

pub fn make_family(family: Family, size: usize, cap: usize) -> Result<SpaceInstance> {
    match family {
        Family::Path => make_path(size),
        Family::Cycle => make_cycle(size),
        Family::Grid => make_grid(size, size),
        Family::Tree { seed } => make_random_tree(size, seed),
        Family::FreeGroup => make_free_group_ball(2, size, cap),
        Family::Zfp => make_free_product_ball(size, cap),
        Family::Strip => make_sheet_strip(size, STRIP_SHEET_RADIUS),
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path => f.write_str("path"),
            Family::Cycle => f.write_str("cycle"),
            Family::Grid => f.write_str("grid"),
            Family::Tree { seed } => write!(f, "tree:{seed}"),
            Family::FreeGroup => f.write_str("free"),
            Family::Zfp => f.write_str("zfp"),
            Family::Strip => f.write_str("zfp-strip"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "grid" => Family::Grid,
            "tree" => Family::Tree { seed: 0 },
            "free" => Family::FreeGroup,
            "zfp" => Family::Zfp,
            "zfp-strip" => Family::Strip,
            _ => match s.strip_prefix("tree:").map(str::parse) {
                Some(Ok(seed)) => Family::Tree { seed },
                _ => {
                    return Err(Error::input(format!(
                        "unknown family {s:?} (path, cycle, grid, tree[:SEED], free, zfp, zfp-strip)"
                    )))
                }
            },
        })
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in ["path", "cycle", "grid", "tree:7", "free", "zfp", "zfp-strip"] {
            assert_eq!(s.parse::<Family>().unwrap().to_string(), s);
        }
        assert!("torus".parse::<Family>().is_err());
        assert_eq!(make_family(Family::Grid, 3, 100).unwrap().graph.edge_count(), 12);
    }
}
