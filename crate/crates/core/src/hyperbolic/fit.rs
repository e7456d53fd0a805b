//! Quasi-geodesic and quasi-isometry constants, fitted on a grid of
//! quarters.

use serde::Serialize;

use crate::analysis::has_bgi;
use crate::metric::{DistanceMatrix, MetricGraph, Segment, Vertex};

/// A nonnegative multiple of one quarter, stored as the numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarters(pub u32);

impl Quarters {
    pub const ONE: Quarters = Quarters(4);

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 4.0
    }
}

impl Serialize for Quarters {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

impl std::fmt::Display for Quarters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// Least `L = k/4 >= 1` with `a/L - L <= b` for every pair `(a, b)`.
fn fit_lower(pairs: impl Iterator<Item = (u32, u32)>) -> Quarters {
    let mut k = 4u64;
    for (a, b) in pairs {
        // a/L - L <= b  <=>  16a - k^2 <= 4kb
        while 16 * a as u64 > k * k + 4 * k * b as u64 {
            k += 1;
        }
    }
    Quarters(k as u32)
}

/// Least `L = k/4 >= 1` with `b <= L·a + L` for every pair.
fn fit_upper(pairs: impl Iterator<Item = (u32, u32)>) -> Quarters {
    let mut k = 4u64;
    for (a, b) in pairs {
        // 4b <= k(a + 1)
        let need = (4 * b as u64).div_ceil(a as u64 + 1);
        k = k.max(need);
    }
    Quarters(k as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QGFit {
    pub q: Quarters,
    /// Index pair forcing the value, if any pair exceeds `Q = 1`.
    pub worst: Option<(usize, usize)>,
}

/// Least `Q` with `|t - s|/Q - Q <= d̂(γ(s), γ(t))` along the segment.
pub fn qg_fit(hat_d: &DistanceMatrix, seg: &Segment) -> QGFit {
    let vs = seg.vertices();
    let mut q = Quarters::ONE;
    let mut worst = None;
    for s in 0..vs.len() {
        for t in s + 1..vs.len() {
            let k = fit_lower(std::iter::once(((t - s) as u32, hat_d.get(vs[s], vs[t]))));
            if k > q {
                q = k;
                worst = Some((s, t));
            }
        }
    }
    QGFit { q, worst }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QiFit {
    /// Least `L` with `d/L - L <= d̂` on the set.
    pub lower: Quarters,
    /// Whether `d̂ <= d` held throughout.
    pub dominated: bool,
    pub pairs: usize,
}

/// How far the inclusion of `ys` into the contraction space is from a
/// quasi-isometric embedding.
pub fn qi_embedding_audit(d: &DistanceMatrix, hat_d: &DistanceMatrix, ys: &[Vertex]) -> QiFit {
    let pairs: Vec<(u32, u32)> = ys
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| ys[i + 1..].iter().map(move |&v| (u, v)))
        .map(|(u, v)| (d.get(u, v), hat_d.get(u, v)))
        .collect();
    QiFit {
        lower: fit_lower(pairs.iter().copied()),
        dominated: pairs.iter().all(|&(a, b)| b <= a),
        pairs: pairs.len(),
    }
}

/// Two-sided quasi-isometry constant `L` with `a/L - L <= b <= L·a + L`
/// over the given distance pairs `(a, b)`.
pub fn fit_quasi_isometry(pairs: &[(u32, u32)]) -> Quarters {
    let lower = fit_lower(pairs.iter().copied());
    let upper = fit_upper(pairs.iter().copied());
    lower.max(upper)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BgiFromQReport {
    pub q: Quarters,
    /// `⌈27Q²⌉`.
    pub bound: u32,
    /// `None` when the audit was skipped.
    pub passed: Option<bool>,
    pub skipped: Option<String>,
}

/// Fits `Q` for the segment's image and checks bounded geodesic image with
/// constant `⌈27Q²⌉`. Skipped when `Q` exceeds `q_cap`.
pub fn bgi_from_q_audit(
    g: &MetricGraph,
    d: &DistanceMatrix,
    hat_d: &DistanceMatrix,
    seg: &Segment,
    q_cap: Quarters,
) -> BgiFromQReport {
    let q = qg_fit(hat_d, seg).q;
    let bound = (27 * q.0 * q.0).div_ceil(16);
    if q > q_cap {
        return BgiFromQReport {
            q,
            bound,
            passed: None,
            skipped: Some(format!("fitted Q = {q} exceeds the cap {q_cap}")),
        };
    }
    BgiFromQReport {
        q,
        bound,
        passed: Some(has_bgi(g, d, seg, bound)),
        skipped: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_lower(pairs: &[(u32, u32)]) -> u32 {
        (4..)
            .find(|&k| {
                let l = k as f64 / 4.0;
                pairs.iter().all(|&(a, b)| a as f64 / l - l <= b as f64 + 1e-9)
            })
            .unwrap()
    }

    #[test]
    fn lower_fit_matches_float_search() {
        let cases: Vec<Vec<(u32, u32)>> = vec![
            vec![(1, 1)],
            vec![(10, 1)],
            vec![(12, 2), (30, 1)],
            vec![(64, 1), (5, 0)],
            vec![(3, 3), (7, 2)],
        ];
        for c in cases {
            assert_eq!(fit_lower(c.iter().copied()).0, brute_lower(&c), "{c:?}");
        }
    }

    #[test]
    fn upper_fit() {
        assert_eq!(fit_upper([(1, 2)].into_iter()), Quarters(4));
        // 9 <= L(1) + L  =>  L >= 4.5
        assert_eq!(fit_upper([(1, 9)].into_iter()), Quarters(18));
        assert_eq!(fit_quasi_isometry(&[(2, 2), (3, 3)]), Quarters::ONE);
    }
}
