//! Brute-force oracles and the small-graph corpus shared by the
//! integration tests. Everything here is written from the definitions,
//! with explicit path enumeration, and shares no code with the deciders
//! beyond graph construction and BFS distances.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use contraction_core::metric::{Center, MetricGraph};
use contraction_core::spaces::{make_cycle, make_grid};

/// Plain all-pairs BFS table.
pub fn distances(g: &MetricGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    (0..n)
        .map(|s| {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for w in g.neighbors(u) {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        q.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Every geodesic from `a` to `b` as an explicit vertex list.
pub fn geodesic_paths(g: &MetricGraph, d: &[Vec<u32>], a: usize, b: usize) -> Vec<Vec<usize>> {
    fn go(g: &MetricGraph, d: &[Vec<u32>], b: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == b {
            out.push(path.clone());
            return;
        }
        for w in g.neighbors(u) {
            if d[w][b] + 1 == d[u][b] {
                path.push(w);
                go(g, d, b, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, d, b, &mut vec![a], &mut out);
    out
}

/// Closed ball membership, radius given doubled.
pub fn in_ball(d: &[Vec<u32>], center: Center, r2: u32, v: usize) -> bool {
    match center {
        Center::Vertex(c) => 2 * d[v][c] <= r2,
        Center::Edge(u, w) => 2 * d[v][u].min(d[v][w]) < r2,
    }
}

/// Whether the path touches the ball: a vertex inside, or a traversal of
/// the central edge (whose midpoint is the centre).
pub fn path_meets_ball(d: &[Vec<u32>], center: Center, r2: u32, path: &[usize]) -> bool {
    if path.iter().any(|&v| in_ball(d, center, r2, v)) {
        return true;
    }
    if let Center::Edge(u, w) = center {
        return path
            .windows(2)
            .any(|e| (e[0] == u && e[1] == w) || (e[0] == w && e[1] == u));
    }
    false
}

/// Thinness by enumerating every quadrangle: corners `x, y` aligned with
/// the segment, free corners `z, w`, and every geodesic choice for the three
/// other sides.
pub fn brute_is_thin(g: &MetricGraph, p: usize, q: usize, center: Center, r2: u32) -> bool {
    let d = distances(g);
    let n = g.vertex_count();
    let len = d[p][q];
    // side_ok[a][b]: some geodesic from a to b misses the ball
    let mut side_ok = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            side_ok[a][b] = geodesic_paths(g, &d, a, b)
                .iter()
                .any(|path| !path_meets_ball(&d, center, r2, path));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if d[x][y] != d[x][p] + len + d[q][y] {
                continue;
            }
            for z in 0..n {
                if !side_ok[y][z] {
                    continue;
                }
                for w in 0..n {
                    if side_ok[z][w] && side_ok[w][x] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All valid midpoints of geodesics from `p` to `q`.
pub fn midpoints(g: &MetricGraph, p: usize, q: usize) -> BTreeSet<Center> {
    let d = distances(g);
    geodesic_paths(g, &d, p, q)
        .iter()
        .map(|path| {
            let len = path.len() - 1;
            if len % 2 == 0 {
                Center::Vertex(path[len / 2])
            } else {
                Center::Edge(path[len / 2], path[len / 2 + 1]).canonical()
            }
        })
        .collect()
}

/// Nearest positions along the segment.
fn projection(d: &[Vec<u32>], seg: &[usize], v: usize) -> (u32, Vec<usize>) {
    let best = seg.iter().map(|&s| d[v][s]).min().unwrap();
    (
        best,
        (0..seg.len()).filter(|&i| d[v][seg[i]] == best).collect(),
    )
}

/// Bounded geodesic image by enumerating every geodesic of the graph.
pub fn brute_has_bgi(g: &MetricGraph, seg: &[usize], c: u32) -> bool {
    let d = distances(g);
    let n = g.vertex_count();
    for a in 0..n {
        for b in 0..n {
            for lambda in geodesic_paths(g, &d, a, b) {
                if lambda.iter().any(|&v| projection(&d, seg, v).0 < c) {
                    continue;
                }
                let pts: Vec<usize> = lambda
                    .iter()
                    .flat_map(|&v| projection(&d, seg, v).1)
                    .map(|i| seg[i])
                    .collect();
                let diam = pts
                    .iter()
                    .flat_map(|&s| pts.iter().map(move |&t| (s, t)))
                    .map(|(s, t)| d[s][t])
                    .max()
                    .unwrap();
                if diam > c {
                    return false;
                }
            }
        }
    }
    true
}

/// Strong contraction from the definition with the open-ball reading.
pub fn brute_min_contraction(g: &MetricGraph, seg: &[usize]) -> u32 {
    let d = distances(g);
    let n = g.vertex_count();
    let mut worst = 0;
    for v in 0..n {
        let r = projection(&d, seg, v).0;
        let pts: Vec<usize> = (0..n)
            .filter(|&u| d[u][v] < r)
            .flat_map(|u| projection(&d, seg, u).1)
            .map(|i| seg[i])
            .collect();
        for &s in &pts {
            for &t in &pts {
                worst = worst.max(d[s][t]);
            }
        }
    }
    worst
}

/// Anti-contracting pairs from the definitions: for every geodesic from `x`
/// to `y` and every subsegment, check thinness at every radius its length
/// allows. `k(r2)` is the gauge at doubled radius `r2` (`None` for ∞).
pub fn brute_anti_contracting(g: &MetricGraph, k: &dyn Fn(u32) -> Option<u32>) -> BTreeSet<(usize, usize)> {
    let d = distances(g);
    let n = g.vertex_count();
    let mut thin_cache = std::collections::HashMap::new();
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            let mut separated = false;
            'paths: for path in geodesic_paths(g, &d, x, y) {
                for i in 0..path.len() {
                    for j in i + 1..path.len() {
                        let len = (j - i) as u32;
                        let sub = &path[i..=j];
                        let c = if len.is_multiple_of(2) {
                            Center::Vertex(sub[len as usize / 2])
                        } else {
                            Center::Edge(sub[len as usize / 2], sub[len as usize / 2 + 1]).canonical()
                        };
                        let mut r2 = 0;
                        while let Some(kr) = k(r2) {
                            if kr > len {
                                break;
                            }
                            let key = (sub[0], sub[len as usize], c, r2);
                            let thin = *thin_cache
                                .entry(key)
                                .or_insert_with(|| brute_is_thin(g, sub[0], sub[len as usize], c, r2));
                            if thin {
                                separated = true;
                                break 'paths;
                            }
                            r2 += 1;
                        }
                    }
                }
            }
            if !separated {
                out.insert((x, y));
            }
        }
    }
    out
}

/// Anti-contracting pairs for the quadrangle mode: a subsegment separates
/// at radius `r` when it is at least `K(r)` long and every sub-run of length
/// at least `3r` is r-thin.
pub fn brute_quad_anti_contracting(g: &MetricGraph, k: &dyn Fn(u32) -> Option<u32>) -> BTreeSet<(usize, usize)> {
    let d = distances(g);
    let n = g.vertex_count();
    let mut thin_cache = std::collections::HashMap::new();
    let mut thin = |run: &[usize], r2: u32| {
        let len = run.len() - 1;
        let c = if len.is_multiple_of(2) {
            Center::Vertex(run[len / 2])
        } else {
            Center::Edge(run[len / 2], run[len / 2 + 1]).canonical()
        };
        *thin_cache
            .entry((run[0], run[len], c, r2))
            .or_insert_with(|| brute_is_thin(g, run[0], run[len], c, r2))
    };
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            let mut separated = false;
            'paths: for path in geodesic_paths(g, &d, x, y) {
                for i in 0..path.len() {
                    for j in i + 1..path.len() {
                        let sub = &path[i..=j];
                        let len = (j - i) as u32;
                        let mut r2 = 0;
                        while let Some(kr) = k(r2) {
                            if kr > len {
                                break;
                            }
                            // 3r <= m  iff  3 * r2 <= 2m
                            let contracting = (0..sub.len()).all(|a| {
                                (a + 1..sub.len())
                                    .chain(std::iter::once(a))
                                    .filter(|&b| 3 * r2 <= 2 * (b - a) as u32)
                                    .all(|b| thin(&sub[a..=b], r2))
                            });
                            if contracting {
                                separated = true;
                                break 'paths;
                            }
                            r2 += 1;
                        }
                    }
                }
            }
            if !separated {
                out.insert((x, y));
            }
        }
    }
    out
}

/// Canonical form of an unrooted tree: the least rooted encoding over all
/// roots.
fn tree_code(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn enc(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| enc(adj, w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    (0..n).map(|r| enc(&adj, r, usize::MAX)).min().unwrap()
}

/// All trees on `n` vertices up to isomorphism.
pub fn all_trees(n: usize) -> Vec<MetricGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut parents = vec![0usize; n];
    fn rec(
        i: usize,
        n: usize,
        parents: &mut Vec<usize>,
        seen: &mut BTreeSet<String>,
        out: &mut Vec<MetricGraph>,
    ) {
        if i == n {
            let edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v], v)).collect();
            if seen.insert(tree_code(n, &edges)) {
                out.push(MetricGraph::new(n, &edges).unwrap());
            }
            return;
        }
        for p in 0..i {
            parents[i] = p;
            rec(i + 1, n, parents, seen, out);
        }
    }
    rec(1, n, &mut parents, &mut seen, &mut out);
    out
}

/// The fixed oracle corpus: every tree on at most 7 vertices, the cycles
/// `C4..C12`, and the 3×3 and 3×4 grids.
pub fn corpus() -> Vec<(String, MetricGraph)> {
    let mut out = Vec::new();
    for n in 2..=7 {
        for (i, t) in all_trees(n).into_iter().enumerate() {
            out.push((format!("tree{n}.{i}"), t));
        }
    }
    for n in 4..=12 {
        out.push((format!("C{n}"), make_cycle(n).unwrap().graph));
    }
    out.push(("grid3x3".into(), make_grid(3, 3).unwrap().graph));
    out.push(("grid3x4".into(), make_grid(3, 4).unwrap().graph));
    out
}
