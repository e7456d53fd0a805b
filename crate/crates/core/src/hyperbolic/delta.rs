//! Four-point hyperbolicity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::metric::{DistanceMatrix, HalfInt, Vertex};

/// Up to this many vertices every quadruple is examined.
pub const EXHAUSTIVE_LIMIT: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SampleSpec {
    /// Exhaustive when the vertex count allows, otherwise seeded sampling.
    Auto { seed: u64, samples: usize },
    Exhaustive,
    Seeded { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub delta: HalfInt,
    pub quadruple: [Vertex; 4],
    /// What was actually examined.
    pub sample: SampleSpec,
    pub quadruples_checked: u64,
}

/// Half the gap between the largest and middle of the three pair sums.
pub fn four_point_defect(d: &DistanceMatrix, [x, y, z, w]: [Vertex; 4]) -> HalfInt {
    let mut s = [
        d.get(x, y) + d.get(z, w),
        d.get(x, z) + d.get(y, w),
        d.get(x, w) + d.get(y, z),
    ];
    s.sort_unstable();
    HalfInt::from_doubled(s[2] - s[1])
}

pub fn four_point_delta(d: &DistanceMatrix, spec: SampleSpec) -> DeltaReport {
    let n = d.dimension();
    let exhaustive = match spec {
        SampleSpec::Exhaustive => true,
        SampleSpec::Auto { .. } => n <= EXHAUSTIVE_LIMIT,
        SampleSpec::Seeded { .. } => false,
    };
    if exhaustive {
        // the defect is symmetric, so increasing quadruples suffice; ties go
        // to the lexicographically first
        let best = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut best = (HalfInt::ZERO, [x, x, x, x]);
                for y in x..n {
                    for z in y..n {
                        for w in z..n {
                            let q = [x, y, z, w];
                            let v = four_point_defect(d, q);
                            if v > best.0 {
                                best = (v, q);
                            }
                        }
                    }
                }
                best
            })
            .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
            .unwrap_or((HalfInt::ZERO, [0; 4]));
        let m = n as u64;
        return DeltaReport {
            delta: best.0,
            quadruple: best.1,
            sample: SampleSpec::Exhaustive,
            quadruples_checked: m * (m + 1) * (m + 2) * (m + 3) / 24,
        };
    }
    let (seed, samples) = match spec {
        SampleSpec::Auto { seed, samples } | SampleSpec::Seeded { seed, samples } => (seed, samples),
        SampleSpec::Exhaustive => unreachable!(),
    };
    let quads = sample_tuples::<4>(n, samples, seed);
    let best = quads
        .par_iter()
        .enumerate()
        .map(|(i, &q)| (four_point_defect(d, q), i))
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (delta, quadruple) = match best {
        Some((v, i)) => (v, quads[i]),
        None => (HalfInt::ZERO, [0; 4]),
    };
    DeltaReport {
        delta,
        quadruple,
        sample: SampleSpec::Seeded { seed, samples },
        quadruples_checked: quads.len() as u64,
    }
}

/// `count` uniform tuples of vertices from a seeded stream.
pub fn sample_tuples<const K: usize>(n: usize, count: usize, seed: u64) -> Vec<[Vertex; K]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.gen_range(0..n)))
        .collect()
}
