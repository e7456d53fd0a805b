//! Deterministic generators for the example families.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::free_product::{Generator, NormalForm};
use super::structure::bass_serre_projection;
use super::{PeripheralSystem, SpaceInstance};
use crate::error::{Error, Result};
use crate::metric::{bfs_distances, MetricGraph, Segment, Vertex};

pub const DEFAULT_GENERATION_CAP: usize = 20_000;
pub const DEFAULT_SWEEP_CAP: usize = 3_000;

fn at_least_two(what: &str, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::input(format!("{what} must be at least 2, got {n}")));
    }
    Ok(())
}

pub fn make_path(n: usize) -> Result<SpaceInstance> {
    at_least_two("path size", n)?;
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    let g = MetricGraph::new(n, &edges)?;
    let mut inst = SpaceInstance::plain("path", n.to_string(), g);
    inst.segments.insert("path".into(), (0..n).collect());
    Ok(inst)
}

pub fn make_cycle(n: usize) -> Result<SpaceInstance> {
    if n < 3 {
        return Err(Error::input(format!("cycle size must be at least 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let g = MetricGraph::new(n, &edges)?;
    let mut inst = SpaceInstance::plain("cycle", n.to_string(), g);
    inst.segments.insert("arc".into(), (0..=n / 2).collect());
    Ok(inst)
}

/// The `w × h` grid; vertex `(i, j)` has id `i + w·j`.
pub fn make_grid(w: usize, h: usize) -> Result<SpaceInstance> {
    at_least_two("grid width", w)?;
    at_least_two("grid height", h)?;
    let id = |i: usize, j: usize| i + w * j;
    let mut edges = Vec::new();
    for j in 0..h {
        for i in 0..w {
            if i + 1 < w {
                edges.push((id(i, j), id(i + 1, j)));
            }
            if j + 1 < h {
                edges.push((id(i, j), id(i, j + 1)));
            }
        }
    }
    let labels = (0..h)
        .flat_map(|j| (0..w).map(move |i| format!("({i},{j})")))
        .collect();
    let g = MetricGraph::new(w * h, &edges)?.with_labels(labels)?;
    let mut inst = SpaceInstance::plain("grid", format!("{w}x{h}"), g);
    inst.segments.insert("row".into(), (0..w).map(|i| id(i, 0)).collect());
    inst.segments
        .insert("mid-row".into(), (0..w).map(|i| id(i, h / 2)).collect());
    Ok(inst)
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn make_random_tree(n: usize, seed: u64) -> Result<SpaceInstance> {
    at_least_two("tree size", n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    let g = MetricGraph::new(n, &edges)?;
    Ok(SpaceInstance::plain("tree", format!("{n}:{seed}"), g))
}

/// The radius-`radius` ball of the free group of the given rank, i.e. of
/// the `2·rank`-regular tree.
pub fn make_free_group_ball(rank: usize, radius: usize, cap: usize) -> Result<SpaceInstance> {
    if !(2..=13).contains(&rank) {
        return Err(Error::input(format!("rank must be in 2..=13, got {rank}")));
    }
    if radius < 1 {
        return Err(Error::input("radius must be at least 1"));
    }
    let mut needed: usize = 1;
    let mut layer: usize = 2 * rank;
    for _ in 0..radius {
        needed = needed.saturating_add(layer);
        layer = layer.saturating_mul(2 * rank - 1);
    }
    if needed > cap {
        return Err(Error::CapExceeded {
            what: format!("free group ball rank {rank} radius {radius}"),
            needed,
            cap,
        });
    }
    // words as letter indices: 2i is the i-th generator, 2i+1 its inverse
    let letter = |x: usize| {
        let c = (b'a' + (x / 2) as u8) as char;
        if x.is_multiple_of(2) {
            c
        } else {
            c.to_ascii_uppercase()
        }
    };
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut edges = Vec::new();
    let mut head = 0;
    while head < words.len() {
        let w = words[head].clone();
        if w.len() < radius {
            for x in 0..2 * rank {
                if w.last() == Some(&(x ^ 1)) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(x);
                edges.push((head, words.len()));
                words.push(nw);
            }
        }
        head += 1;
    }
    let labels = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "e".to_string()
            } else {
                w.iter().map(|&x| letter(x)).collect()
            }
        })
        .collect::<Vec<String>>();
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let axis: Vec<Vertex> = (0..=2 * radius)
        .map(|k| {
            let word: String = if k < radius {
                "A".repeat(radius - k)
            } else if k == radius {
                "e".into()
            } else {
                "a".repeat(k - radius)
            };
            index[word.as_str()]
        })
        .collect();
    let g = MetricGraph::new(words.len(), &edges)?.with_labels(labels)?;
    let mut inst = SpaceInstance::plain("free", format!("{rank}:{radius}"), g);
    inst.segments.insert("axis".into(), axis);
    Ok(inst)
}

/// Builds the Cayley graph on a set of normal forms closed under taking
/// prefixes, joining words that differ by one generator.
fn free_product_space(family: &str, param: String, words: Vec<NormalForm>) -> Result<SpaceInstance> {
    let index: HashMap<&NormalForm, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut edges = Vec::new();
    for (i, w) in words.iter().enumerate() {
        for g in Generator::ALL {
            if let Some(&j) = index.get(&w.times(g)) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let mut sheet_ids: HashMap<NormalForm, usize> = HashMap::new();
    let sheets: Vec<usize> = words
        .iter()
        .map(|w| {
            let next = sheet_ids.len();
            *sheet_ids.entry(w.sheet()).or_insert(next)
        })
        .collect();
    let labels = words.iter().map(|w| w.to_string()).collect();
    let g = MetricGraph::new(words.len(), &edges)?.with_labels(labels)?;
    let mut members = vec![Vec::new(); sheet_ids.len()];
    for (v, &s) in sheets.iter().enumerate() {
        members[s].push(v);
    }
    let peripherals = PeripheralSystem::new(
        words.len(),
        members.into_iter().filter(|m| m.len() >= 2).collect(),
    )?;
    let mut inst = SpaceInstance::plain(family, param, g);
    inst.sheets = Some(sheets);
    inst.peripherals = peripherals;
    // the quotient must be a tree; this checks the construction
    bass_serre_projection(&inst)?;
    Ok(inst)
}

/// The radius-`radius` ball of the Cayley graph of `Z * Z^2` for the
/// generators `a`, `b`, `c`, with its sheets and the `a`-axis.
pub fn make_free_product_ball(radius: usize, cap: usize) -> Result<SpaceInstance> {
    if radius < 1 {
        return Err(Error::input("radius must be at least 1"));
    }
    let mut words = vec![NormalForm::identity()];
    let mut seen: HashMap<NormalForm, ()> = HashMap::new();
    seen.insert(NormalForm::identity(), ());
    let mut head = 0;
    while head < words.len() {
        let w = words[head].clone();
        head += 1;
        if w.word_length() as usize >= radius {
            continue;
        }
        for g in Generator::ALL {
            let nw = w.times(g);
            if nw.word_length() as usize == w.word_length() as usize + 1 && !seen.contains_key(&nw) {
                seen.insert(nw.clone(), ());
                words.push(nw);
                if words.len() > cap {
                    return Err(Error::CapExceeded {
                        what: format!("free product ball radius {radius}"),
                        needed: words.len(),
                        cap,
                    });
                }
            }
        }
    }
    let axis_words: Vec<NormalForm> = (0..=2 * radius)
        .map(|k| {
            let word = if k < radius {
                "A".repeat(radius - k)
            } else if k == radius {
                "e".into()
            } else {
                "a".repeat(k - radius)
            };
            NormalForm::parse(&word).expect("axis word")
        })
        .collect();
    let mut inst = free_product_space("zfp", radius.to_string(), words)?;
    let index = label_index(&inst.graph);
    let axis = axis_words.iter().map(|w| index[&w.to_string()]).collect();
    inst.segments.insert("a-axis".into(), axis);
    Ok(inst)
}

fn label_index(g: &MetricGraph) -> HashMap<String, Vertex> {
    g.labels()
        .map(|ls| ls.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect())
        .unwrap_or_default()
}

/// The first `budget` letters of `b^5 a b^25 a b^125 a ...`.
pub fn special_word(budget: usize) -> Vec<Generator> {
    let mut out = Vec::with_capacity(budget);
    let mut run = 5usize;
    while out.len() < budget {
        for _ in 0..run {
            if out.len() == budget {
                break;
            }
            out.push(Generator::B(1));
        }
        if out.len() < budget {
            out.push(Generator::A(1));
        }
        run *= 5;
    }
    out
}

/// The prefix of `b^5 a b^25 a ...` with `budget` edges, starting at the
/// identity, as a verified geodesic of the instance.
pub fn make_special_geodesic(inst: &SpaceInstance, budget: usize) -> Result<Segment> {
    if inst.sheets.is_none() {
        return Err(Error::input("special geodesic needs a free-product space"));
    }
    let index = label_index(&inst.graph);
    let mut w = NormalForm::identity();
    let mut vertices = Vec::with_capacity(budget + 1);
    for g in std::iter::once(None).chain(special_word(budget).into_iter().map(Some)) {
        if let Some(g) = g {
            w = w.times(g);
        }
        let v = *index.get(&w.to_string()).ok_or_else(|| {
            Error::input(format!(
                "budget {budget} exceeds the space: {w} is not a vertex of {} {}",
                inst.family, inst.param
            ))
        })?;
        vertices.push(v);
    }
    let dist = bfs_distances(&inst.graph, vertices[0]);
    for (k, &v) in vertices.iter().enumerate() {
        if dist[v] != Some(k as u32) {
            return Err(Error::input(format!("prefix of length {k} is not geodesic")));
        }
    }
    for pair in vertices.windows(2) {
        debug_assert!(inst.graph.has_edge(pair[0], pair[1]));
    }
    Ok(Segment::from_trusted(vertices))
}

/// The union of the `rho`-neighbourhood rectangles `s·b^m c^n`
/// (`|m|, |n| ≤ rho`) of the vertices `s` of the special geodesic with
/// `budget` edges. Each piece is a rectangle of a sheet and the pieces are
/// glued along single `a`-edges, so the strip is convex in the Cayley graph
/// and its distances are the Cayley distances.
pub fn make_sheet_strip(budget: usize, rho: usize) -> Result<SpaceInstance> {
    let rho = rho as i32;
    let mut path = vec![NormalForm::identity()];
    for g in special_word(budget) {
        let next = path.last().unwrap().times(g);
        path.push(next);
    }
    let mut words: Vec<NormalForm> = Vec::new();
    let mut seen: HashMap<NormalForm, ()> = HashMap::new();
    for s in &path {
        for m in -rho..=rho {
            for n in -rho..=rho {
                let mut w = s.clone();
                for _ in 0..m.unsigned_abs() {
                    w = w.times(Generator::B(m.signum()));
                }
                for _ in 0..n.unsigned_abs() {
                    w = w.times(Generator::C(n.signum()));
                }
                if seen.insert(w.clone(), ()).is_none() {
                    words.push(w);
                }
            }
        }
    }
    // id order by word length, then normal form
    words.sort_by(|x, y| x.word_length().cmp(&y.word_length()).then_with(|| x.cmp(y)));
    let mut inst = free_product_space("zfp-strip", format!("{budget}:{rho}"), words)?;
    let index = label_index(&inst.graph);
    let seg = path.iter().map(|w| index[&w.to_string()]).collect();
    inst.segments.insert("special".into(), seg);
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::all_pairs_distances;
    use crate::spaces::free_product::reduce_word;
    use std::collections::HashSet;

    #[test]
    fn small_families() {
        assert_eq!(make_path(4).unwrap().graph.edge_count(), 3);
        assert_eq!(make_cycle(4).unwrap().graph.edge_count(), 4);
        assert_eq!(make_grid(3, 3).unwrap().graph.edge_count(), 12);
        assert!(make_path(1).is_err());
        assert!(make_grid(1, 3).is_err());
        let g = make_grid(3, 2).unwrap();
        assert_eq!(g.graph.label(4), Some("(1,1)"));
        let t = make_random_tree(50, 7).unwrap();
        assert_eq!(t.graph.edge_count(), 49);
        assert_eq!(t, make_random_tree(50, 7).unwrap());
    }

    #[test]
    fn free_group_balls() {
        let star = make_free_group_ball(2, 1, DEFAULT_GENERATION_CAP).unwrap();
        assert_eq!(star.graph.vertex_count(), 5);
        assert_eq!(star.graph.degree(0), 4);
        assert_eq!(make_free_group_ball(2, 2, DEFAULT_GENERATION_CAP).unwrap().graph.vertex_count(), 17);
        assert!(make_free_group_ball(2, 0, DEFAULT_GENERATION_CAP).is_err());
        assert!(matches!(
            make_free_group_ball(2, 9, 1000),
            Err(Error::CapExceeded { .. })
        ));
        let b = make_free_group_ball(2, 3, DEFAULT_GENERATION_CAP).unwrap();
        assert_eq!(b.segment("axis").unwrap().len(), 7);
    }

    #[test]
    fn free_product_ball_counts() {
        let b1 = make_free_product_ball(1, DEFAULT_GENERATION_CAP).unwrap();
        assert_eq!(b1.graph.vertex_count(), 7);
        // independent count: reduce every word of length <= 2
        let letters = Generator::ALL;
        let mut forms = HashSet::new();
        forms.insert(reduce_word(&[]));
        for &x in &letters {
            forms.insert(reduce_word(&[x]));
            for &y in &letters {
                forms.insert(reduce_word(&[x, y]));
            }
        }
        let b2 = make_free_product_ball(2, DEFAULT_GENERATION_CAP).unwrap();
        assert_eq!(b2.graph.vertex_count(), forms.len());
        let sizes: Vec<usize> = (3..=5)
            .map(|r| make_free_product_ball(r, DEFAULT_GENERATION_CAP).unwrap().graph.vertex_count())
            .collect();
        assert_eq!(sizes, vec![143, 609, 2583]);
    }

    #[test]
    fn sheet_of_identity_is_a_diamond() {
        let r = 3;
        let b = make_free_product_ball(r, DEFAULT_GENERATION_CAP).unwrap();
        let sheets = b.sheets.as_ref().unwrap();
        let members: Vec<_> = (0..b.graph.vertex_count()).filter(|&v| sheets[v] == sheets[0]).collect();
        let expected = 2 * r * r + 2 * r + 1;
        assert_eq!(members.len(), expected);
        for v in members {
            let w = NormalForm::parse(b.graph.label(v).unwrap()).unwrap();
            assert!(w.syllables().len() <= 1 && w.a_syllables() == 0);
        }
    }

    #[test]
    fn distances_are_word_lengths() {
        let b = make_free_product_ball(3, DEFAULT_GENERATION_CAP).unwrap();
        let d = all_pairs_distances(&b.graph).unwrap();
        let forms: Vec<NormalForm> = b
            .graph
            .labels()
            .unwrap()
            .iter()
            .map(|l| NormalForm::parse(l).unwrap())
            .collect();
        for v in 0..forms.len() {
            assert_eq!(d.get(0, v), forms[v].word_length());
        }
    }

    #[test]
    fn special_geodesic_prefixes() {
        let word: String = special_word(6).iter().map(|g| format!("{g:?}")).collect();
        assert_eq!(word, "B(1)B(1)B(1)B(1)B(1)A(1)");
        assert_eq!(special_word(32).iter().filter(|g| !g.in_sheet()).count(), 2);
        let b = make_free_product_ball(6, DEFAULT_GENERATION_CAP).unwrap();
        let seg = make_special_geodesic(&b, 6).unwrap();
        assert_eq!(seg.len(), 6);
        assert_eq!(b.graph.label(seg.last()), Some("bbbbba"));
        assert!(make_special_geodesic(&b, 7).is_err());
    }

    #[test]
    fn strip_is_isometric_to_the_cayley_graph() {
        let s = make_sheet_strip(8, 2).unwrap();
        let d = all_pairs_distances(&s.graph).unwrap();
        let forms: Vec<NormalForm> = s
            .graph
            .labels()
            .unwrap()
            .iter()
            .map(|l| NormalForm::parse(l).unwrap())
            .collect();
        for u in 0..forms.len() {
            for v in 0..forms.len() {
                assert_eq!(d.get(u, v), forms[u].distance(&forms[v]));
            }
        }
        let seg = make_special_geodesic(&s, 8).unwrap();
        assert_eq!(seg.vertices(), s.segment("special").unwrap());
    }
}
