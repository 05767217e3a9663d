//! Spanning trees, broken circuits, internal/external activity and the
//! basis-exchange maps between NBC trees.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, OrderedGraph, UnionFind};

/// Default edge limit for [`shelling_partition`].
pub const SHELLING_EDGE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activity {
    /// Internally active tree edge (`L`).
    Live,
    /// Internally inactive tree edge (`D`).
    Dead,
    /// Externally active non-tree edge (`l`).
    ExternalLive,
    /// Externally inactive non-tree edge (`d`).
    ExternalDead,
}

impl Activity {
    pub fn letter(self) -> char {
        match self {
            Activity::Live => 'L',
            Activity::Dead => 'D',
            Activity::ExternalLive => 'l',
            Activity::ExternalDead => 'd',
        }
    }
}

/// A spanning tree together with its activity data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeRecord {
    pub edges: EdgeSubset,
    /// IN(T): tree edges that are not the minimum of their cut.
    pub dead: EdgeSubset,
    /// IA(T): tree edges that are the minimum of their cut.
    pub live: EdgeSubset,
    /// EN(T): every edge outside the tree.
    pub external: EdgeSubset,
    /// External edges that are the minimum of their fundamental cycle.
    pub external_live: EdgeSubset,
    /// Position among the NBC trees in lexicographic order (0-based).
    pub lex_rank: usize,
}

impl TreeRecord {
    pub fn new(g: &OrderedGraph, edges: EdgeSubset, lex_rank: usize) -> Result<Self> {
        if !g.is_spanning_tree(edges) {
            return Err(Error::NotSpanningTree);
        }
        let mut dead = EdgeSubset::empty();
        let mut live = EdgeSubset::empty();
        for e in edges.iter() {
            if g.cut_set(edges, e)?.min() == Some(e) {
                live = live.with(e);
            } else {
                dead = dead.with(e);
            }
        }
        let external = g.all_edges().difference(edges);
        let mut external_live = EdgeSubset::empty();
        for f in external.iter() {
            if g.cycle_set(edges, f)?.min() == Some(f) {
                external_live = external_live.with(f);
            }
        }
        Ok(TreeRecord { edges, dead, live, external, external_live, lex_rank })
    }

    /// Homological grading `|IN(T)|`.
    pub fn hom_grading(&self) -> usize {
        self.dead.len()
    }

    pub fn activity(&self, edge: usize) -> Activity {
        if self.live.contains(edge) {
            Activity::Live
        } else if self.dead.contains(edge) {
            Activity::Dead
        } else if self.external_live.contains(edge) {
            Activity::ExternalLive
        } else {
            Activity::ExternalDead
        }
    }

    /// One letter per edge in label order.
    pub fn activity_word(&self, edge_count: usize) -> String {
        (0..edge_count).map(|e| self.activity(e).letter()).collect()
    }

    /// `T1`, `T2`, … as printed in tables.
    pub fn name(&self) -> String {
        format!("T{}", self.lex_rank + 1)
    }
}

/// True iff `s` contains some cycle minus its least edge.
///
/// Equivalently some edge `e` has its endpoints joined inside `s` by edges
/// larger than `e`.
pub fn contains_broken_circuit(g: &OrderedGraph, s: EdgeSubset) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in (0..g.edge_count()).rev() {
        let (a, b) = g.endpoints(e);
        if uf.find(a) == uf.find(b) {
            return true;
        }
        if s.contains(e) {
            uf.union(a, b);
        }
    }
    false
}

fn connects(g: &OrderedGraph, s: EdgeSubset) -> bool {
    g.components(s).count() == 1
}

fn backtrack(
    g: &OrderedGraph,
    next: usize,
    chosen: EdgeSubset,
    nbc_only: bool,
    out: &mut Vec<EdgeSubset>,
) {
    let need = g.vertex_count() - 1;
    if chosen.len() == need {
        out.push(chosen);
        return;
    }
    if next == g.edge_count() || need - chosen.len() > g.edge_count() - next {
        return;
    }
    let (a, b) = g.endpoints(next);
    let parts = g.components(chosen);
    if parts.component_of(a) != parts.component_of(b) {
        let with = chosen.with(next);
        if !nbc_only || !contains_broken_circuit(g, with) {
            backtrack(g, next + 1, with, nbc_only, out);
        }
    }
    // Skipping `next` is only possible if the rest can still span the graph.
    let rest = EdgeSubset::full(g.edge_count()).difference(EdgeSubset::full(next + 1));
    if connects(g, chosen.union(rest)) {
        backtrack(g, next + 1, chosen, nbc_only, out);
    }
}

/// Every spanning tree, in lexicographic order of label tuples.
pub fn enumerate_spanning_trees(g: &OrderedGraph) -> Vec<EdgeSubset> {
    let mut out = Vec::new();
    backtrack(g, 0, EdgeSubset::empty(), false, &mut out);
    out
}

/// The NBC spanning trees of a graph in lexicographic order, with activity data.
#[derive(Clone, Debug)]
pub struct NbcTrees {
    records: Vec<TreeRecord>,
    index: HashMap<EdgeSubset, usize>,
}

impl NbcTrees {
    pub fn records(&self) -> &[TreeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, lex_rank: usize) -> &TreeRecord {
        &self.records[lex_rank]
    }

    pub fn find(&self, edges: EdgeSubset) -> Option<&TreeRecord> {
        self.index.get(&edges).map(|&k| &self.records[k])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TreeRecord> {
        self.records.iter()
    }

    /// Lexicographically largest NBC tree.
    pub fn lex_max(&self) -> &TreeRecord {
        self.records.last().expect("a connected graph has an NBC tree")
    }

    /// Counts `t_i` of NBC trees with exactly `i` internally live edges.
    pub fn live_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for t in &self.records {
            let i = t.live.len();
            if counts.len() <= i {
                counts.resize(i + 1, 0);
            }
            counts[i] += 1;
        }
        counts
    }
}

/// All NBC spanning trees with activity populated and `lex_rank` assigned.
pub fn enumerate_nbc_trees(g: &OrderedGraph) -> NbcTrees {
    let mut trees = Vec::new();
    backtrack(g, 0, EdgeSubset::empty(), true, &mut trees);
    trees.sort_by(|a, b| a.lex_cmp(*b));
    let records: Vec<TreeRecord> = trees
        .into_iter()
        .enumerate()
        .map(|(k, t)| TreeRecord::new(g, t, k).expect("enumerated set is a spanning tree"))
        .collect();
    let index = records.iter().map(|r| (r.edges, r.lex_rank)).collect();
    NbcTrees { records, index }
}

/// `T ∪ {e} \ {max live edge of cyc(T, e)}`.
pub fn psi_e(g: &OrderedGraph, t: &TreeRecord, e: usize) -> Result<EdgeSubset> {
    let cycle = g.cycle_set(t.edges, e)?;
    let drop = cycle.intersection(t.live).max().ok_or(Error::NoImageTree(e + 1))?;
    Ok(t.edges.with(e).without(drop))
}

/// `T ∪ {min cut(T, e)} \ {e}` for a dead edge `e`.
pub fn psi_prime_e(g: &OrderedGraph, t: &TreeRecord, e: usize) -> Result<EdgeSubset> {
    if !t.dead.contains(e) {
        return Err(Error::NotInternallyDead(e + 1));
    }
    let add = g.cut_set(t.edges, e)?.min().expect("cut contains e");
    Ok(t.edges.with(add).without(e))
}

/// How the intervals `[IN(T), T]` cover the NBC complex.
#[derive(Clone, Debug)]
pub struct ShellingPartition {
    /// Every NBC subset, mapped to the lex ranks of the trees whose interval holds it.
    pub cover: BTreeMap<EdgeSubset, Vec<usize>>,
    /// Subsets that lie in some interval but are not NBC (should be empty).
    pub stray: Vec<EdgeSubset>,
}

impl ShellingPartition {
    pub fn is_partition(&self) -> bool {
        self.stray.is_empty() && self.cover.values().all(|v| v.len() == 1)
    }

    /// Lex rank of the unique covering tree.
    pub fn tree_of(&self, s: EdgeSubset) -> Option<usize> {
        match self.cover.get(&s).map(Vec::as_slice) {
            Some([k]) => Some(*k),
            _ => None,
        }
    }
}

/// Assigns every NBC subset to the tree whose interval `[IN(T), T]` contains it.
pub fn shelling_partition(g: &OrderedGraph, trees: &NbcTrees, limit: usize) -> Result<ShellingPartition> {
    if g.edge_count() > limit {
        return Err(Error::LimitExceeded { what: "shelling partition", limit, actual: g.edge_count() });
    }
    let mut cover: BTreeMap<EdgeSubset, Vec<usize>> = BTreeMap::new();
    for bits in 0u64..(1u64 << g.edge_count()) {
        let s = EdgeSubset::from_bits(bits);
        if !contains_broken_circuit(g, s) {
            cover.insert(s, Vec::new());
        }
    }
    let mut stray = Vec::new();
    for t in trees.iter() {
        let free: Vec<usize> = t.live.iter().collect();
        for choice in 0u64..(1u64 << free.len()) {
            let mut s = t.dead;
            for (k, &e) in free.iter().enumerate() {
                if choice >> k & 1 == 1 {
                    s = s.with(e);
                }
            }
            match cover.get_mut(&s) {
                Some(v) => v.push(t.lex_rank),
                None => stray.push(s),
            }
        }
    }
    Ok(ShellingPartition { cover, stray })
}

/// Checks the shelling condition on the lex order; returns a violating pair `(i, j)`.
///
/// For `T_i < T_j` there must be `T_k < T_j` and `x ∈ T_j` with
/// `T_i ∩ T_j ⊆ T_k ∩ T_j = T_j \ {x}`.
pub fn shelling_violation(trees: &NbcTrees) -> Option<(usize, usize)> {
    let recs = trees.records();
    for j in 0..recs.len() {
        let tj = recs[j].edges;
        for i in 0..j {
            let common = recs[i].edges.intersection(tj);
            let ok = recs[..j].iter().any(|tk| {
                let meet = tk.edges.intersection(tj);
                meet.len() + 1 == tj.len() && common.is_subset(meet)
            });
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}
