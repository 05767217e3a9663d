//! Named test graphs, exhaustive small-graph enumeration and seeded random graphs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::OrderedGraph;

fn build(name: &str, vertices: &[&str], edges: &[(&str, &str)], root: &str) -> OrderedGraph {
    OrderedGraph::from_names(vertices, edges, Some(root))
        .expect("built-in graph is valid")
        .with_name(name)
}

fn numbered(name: String, n: usize, edges: &[(usize, usize)]) -> OrderedGraph {
    let names = (1..=n).map(|i| format!("v{i}")).collect();
    OrderedGraph::new(names, edges.to_vec(), 0).expect("built-in graph is valid").with_name(name)
}

/// The 7-vertex, 8-edge worked example (two 4- and 5-cycles sharing the a–d path).
pub fn worked_example() -> OrderedGraph {
    build(
        "worked-example",
        &["a", "b", "d", "e", "f", "g", "h"],
        &[
            ("e", "f"),
            ("a", "e"),
            ("a", "h"),
            ("g", "h"),
            ("g", "d"),
            ("f", "d"),
            ("a", "b"),
            ("b", "d"),
        ],
        "a",
    )
}

pub fn single_vertex() -> OrderedGraph {
    build("k1", &["a"], &[], "a")
}

pub fn k2() -> OrderedGraph {
    build("k2", &["a", "b"], &[("a", "b")], "a")
}

pub fn triangle() -> OrderedGraph {
    build("triangle", &["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")], "a")
}

/// Cycle `v1 … vn` with edge `k` joining `vk` and `v(k+1)`; rooted at `v1`.
pub fn cycle(n: usize) -> OrderedGraph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n)).collect();
    numbered(format!("cycle{n}"), n, &edges)
}

/// Path on `n` vertices.
pub fn path(n: usize) -> OrderedGraph {
    let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
    numbered(format!("path{n}"), n, &edges)
}

pub fn complete(n: usize) -> OrderedGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    numbered(format!("k{n}"), n, &edges)
}

/// Two triangles glued at the root `c`.
pub fn bowtie() -> OrderedGraph {
    build(
        "bowtie",
        &["c", "a", "b", "d", "e"],
        &[("c", "a"), ("a", "b"), ("c", "b"), ("c", "d"), ("d", "e"), ("c", "e")],
        "c",
    )
}

/// A triangle with a two-edge tail: three blocks.
pub fn triangle_with_tail() -> OrderedGraph {
    build(
        "triangle-tail",
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("b", "c"), ("a", "c"), ("c", "d"), ("d", "e")],
        "a",
    )
}

/// Glues `g2`'s root onto `g1`'s root. `g1`'s edges come first in the order.
pub fn wedge(g1: &OrderedGraph, g2: &OrderedGraph) -> OrderedGraph {
    let n1 = g1.vertex_count();
    let mut names: Vec<String> = g1.vertex_names().iter().map(|v| format!("L.{v}")).collect();
    let mut remap = vec![0; g2.vertex_count()];
    for v in 0..g2.vertex_count() {
        if v == g2.root() {
            remap[v] = g1.root();
        } else {
            remap[v] = names.len();
            names.push(format!("R.{}", g2.vertex_names()[v]));
        }
    }
    debug_assert_eq!(names.len(), n1 + g2.vertex_count() - 1);
    let mut edges = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(a, b)| (remap[a], remap[b])));
    let name = format!("{}+{}", g1.name().unwrap_or("g1"), g2.name().unwrap_or("g2"));
    OrderedGraph::new(names, edges, g1.root()).expect("wedge of connected graphs is connected").with_name(name)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative of every connected simple graph on `1..=max_vertices` vertices.
///
/// Representatives use the lexicographically smallest adjacency bitmask; edges are
/// ordered by `(smaller endpoint, larger endpoint)` and the root is `v1`.
pub fn connected_graphs(max_vertices: usize) -> Vec<OrderedGraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let pair_index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
        let perms = permutations(n);
        let mut seen = HashSet::new();
        let mut reps = Vec::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let canon = perms
                .iter()
                .map(|p| {
                    pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(0u64, |acc, (_, &(a, b))| {
                        acc | 1u64 << pair_index(p[a], p[b])
                    })
                })
                .min()
                .unwrap();
            if !seen.insert(canon) {
                continue;
            }
            let edges: Vec<_> =
                pairs.iter().enumerate().filter(|(k, _)| canon >> k & 1 == 1).map(|(_, &p)| p).collect();
            let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            if let Ok(g) = OrderedGraph::new(names, edges, 0) {
                reps.push(g);
            }
        }
        reps.sort_by_key(|g| g.edge_count());
        for (k, g) in reps.into_iter().enumerate() {
            out.push(g.with_name(format!("c{n}.{k}")));
        }
    }
    out
}

/// The fixed verification corpus: every connected graph on at most five vertices,
/// plus the 6- and 7-cycles, the bowtie, a triangle with a tail, and the worked example.
pub fn standard_corpus() -> Vec<OrderedGraph> {
    let mut graphs = connected_graphs(5);
    graphs.extend([cycle(6), cycle(7), bowtie(), triangle_with_tail(), worked_example()]);
    graphs
}

/// Random connected graph: a random spanning tree plus `extra` random chords, in random order.
pub fn random_connected<R: Rng>(rng: &mut R, vertices: usize, extra: usize) -> OrderedGraph {
    assert!(vertices >= 1);
    let mut perm: Vec<usize> = (0..vertices).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for k in 1..vertices {
        let parent = perm[rng.gen_range(0..k)];
        edges.push((parent, perm[k]));
    }
    let mut missing: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
        .filter(|&(a, b)| !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)))
        .collect();
    missing.shuffle(rng);
    edges.extend(missing.into_iter().take(extra));
    edges.shuffle(rng);
    let names = (1..=vertices).map(|i| format!("v{i}")).collect();
    OrderedGraph::new(names, edges, 0).expect("random tree plus chords is connected")
}

/// A seeded batch of random connected graphs.
pub fn random_corpus(count: usize, vertices: usize, extra: usize, seed: u64) -> Vec<OrderedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| random_connected(&mut rng, vertices, extra).with_name(format!("random{seed}.{k}")))
        .collect()
}

/// The same graph with its edges relabeled by a seeded random permutation.
pub fn shuffled_order(g: &OrderedGraph, seed: u64) -> OrderedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=g.edge_count()).collect();
    order.shuffle(&mut rng);
    g.with_order(&order).expect("a permutation is a valid order")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_connected_graphs() {
        let per_size: Vec<usize> =
            (1..=5).map(|n| connected_graphs(5).iter().filter(|g| g.vertex_count() == n).count()).collect();
        assert_eq!(per_size, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_corpus(3, 6, 3, 7);
        let b = random_corpus(3, 6, 3, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.edge_count() == 8));
    }

    #[test]
    fn wedge_counts() {
        let g = wedge(&triangle(), &triangle());
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.blocks().count(), 2);
    }
}
