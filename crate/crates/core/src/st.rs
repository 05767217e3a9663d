//! The spanning-tree chain complex over `A_m = Z[x]/(x^m)`.
//!
//! Generators are NBC trees decorated with exponents on the components of
//! their dead-edge forest. The differential is given in closed form.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{BigradedComplex, ComplexBuilder};
use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::trees::{enumerate_nbc_trees, psi_e, NbcTrees, TreeRecord};

/// One basis element: an NBC tree with an exponent on each component of `IN(T)`.
///
/// Slot 0 is the root component; the rest follow in order of smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StGenerator {
    /// Lex rank of the tree.
    pub tree: usize,
    pub exponents: Vec<u32>,
}

impl StGenerator {
    pub fn new(tree: usize, exponents: Vec<u32>) -> Self {
        StGenerator { tree, exponents }
    }

    /// Quantum grading: sum of exponents.
    pub fn j(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    /// Label such as `T3^(0,1,1)`.
    pub fn id(&self) -> String {
        let exps: Vec<String> = self.exponents.iter().map(u32::to_string).collect();
        format!("T{}^({})", self.tree + 1, exps.join(","))
    }
}

impl fmt::Display for StGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialTerm {
    pub target: StGenerator,
    pub coefficient: i64,
}

/// Component slots of `IN(T)` and the tree they form when contracted.
#[derive(Clone, Debug)]
pub(crate) struct SlotLayout {
    slot_of_vertex: Vec<usize>,
    count: usize,
    parent: Vec<Option<usize>>,
}

impl SlotLayout {
    pub(crate) fn new(g: &OrderedGraph, t: &TreeRecord) -> Self {
        let parts = g.components(t.dead);
        let slot_of_vertex = parts.vertex_slots();
        let count = parts.count();
        let mut adj = vec![Vec::new(); count];
        for e in t.live.iter() {
            let (a, b) = g.endpoints(e);
            let (sa, sb) = (slot_of_vertex[a], slot_of_vertex[b]);
            adj[sa].push(sb);
            adj[sb].push(sa);
        }
        let mut parent = vec![None; count];
        let mut seen = vec![false; count];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(s) = stack.pop() {
            for &n in &adj[s] {
                if !seen[n] {
                    seen[n] = true;
                    parent[n] = Some(s);
                    stack.push(n);
                }
            }
        }
        SlotLayout { slot_of_vertex, count, parent }
    }

    /// Slots from the root slot down to `slot`, inclusive.
    fn path_from_root(&self, slot: usize) -> Vec<usize> {
        let mut path = vec![slot];
        let mut cur = slot;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// An external edge whose exchange raises the grading by one onto an NBC tree.
#[derive(Clone, Debug)]
struct Exchange {
    target_tree: usize,
    sign: i64,
    near: usize,
    far: usize,
    /// Source slot → target slot.
    slot_map: Vec<usize>,
    target_slots: usize,
}

/// Cached per-tree data for evaluating the differential.
struct TreeData {
    layout: SlotLayout,
    exchanges: Vec<Exchange>,
}

fn tree_data(g: &OrderedGraph, trees: &NbcTrees, t: &TreeRecord) -> TreeData {
    let layout = SlotLayout::new(g, t);
    let mut exchanges = Vec::new();
    for e in t.external.iter() {
        let Ok(image) = psi_e(g, t, e) else { continue };
        let Some(target) = trees.find(image) else { continue };
        if target.hom_grading() != t.hom_grading() + 1 {
            continue;
        }
        let target_layout = SlotLayout::new(g, target);
        let mut slot_map = vec![usize::MAX; layout.count];
        for v in 0..g.vertex_count() {
            let (s, ts) = (layout.slot_of_vertex[v], target_layout.slot_of_vertex[v]);
            debug_assert!(slot_map[s] == usize::MAX || slot_map[s] == ts, "IN(T) must refine IN(T')");
            slot_map[s] = ts;
        }
        let (u, v) = g.endpoints(e);
        exchanges.push(Exchange {
            target_tree: target.lex_rank,
            sign: sign_of(xi(t, e)),
            near: layout.slot_of_vertex[u],
            far: layout.slot_of_vertex[v],
            slot_map,
            target_slots: target_layout.count,
        });
    }
    TreeData { layout, exchanges }
}

/// Number of components of `IN(T)`.
pub fn component_count(g: &OrderedGraph, t: &TreeRecord) -> usize {
    g.vertex_count() - t.dead.len()
}

/// Every generator, ordered by tree and then lexicographically by exponent tuple.
pub fn generators(g: &OrderedGraph, trees: &NbcTrees, m: u32) -> Result<Vec<StGenerator>> {
    if m < 2 {
        return Err(Error::BadAlgebra(m));
    }
    let mut out = Vec::new();
    for t in trees.iter() {
        let c = component_count(g, t);
        let mut exps = vec![1u32; c];
        exps[0] = 0;
        loop {
            out.push(StGenerator::new(t.lex_rank, exps.clone()));
            // Odometer over root ∈ 0..m, others ∈ 1..m; last slot varies fastest.
            let advanced = (0..c).rev().any(|k| {
                if exps[k] + 1 < m {
                    exps[k] += 1;
                    true
                } else {
                    exps[k] = u32::from(k != 0);
                    false
                }
            });
            if !advanced {
                break;
            }
        }
    }
    Ok(out)
}

/// Number of dead edges of `t` below `e`.
pub fn xi(t: &TreeRecord, e: usize) -> usize {
    t.dead.count_below(e)
}

/// Zero if the fundamental cycle of `e` has an odd number of live edges,
/// otherwise `(-1)^k` with `k` the live edges on the root path to an endpoint.
pub fn s_e(g: &OrderedGraph, t: &TreeRecord, e: usize) -> Result<i64> {
    let cycle = g.cycle_set(t.edges, e)?;
    if cycle.intersection(t.live).len() % 2 == 1 {
        return Ok(0);
    }
    let (u, v) = g.endpoints(e);
    let live_to = |x: usize| g.unique_path(t.edges, g.root(), x).into_iter().filter(|&d| t.live.contains(d)).count();
    let (lu, lv) = (live_to(u), live_to(v));
    assert_eq!(lu % 2, lv % 2, "endpoint parities must agree when the cycle has an even live count");
    Ok(if lv % 2 == 0 { 1 } else { -1 })
}

fn sign_of(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The `m = 2` differential of a `T⁺` generator; `T⁻` generators map to zero.
pub fn differential_m2(g: &OrderedGraph, trees: &NbcTrees, src: &StGenerator) -> Result<Vec<DifferentialTerm>> {
    let t = trees.get(src.tree);
    if src.exponents[0] != 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for e in t.external.iter() {
        let Ok(image) = psi_e(g, t, e) else { continue };
        let Some(target) = trees.find(image) else { continue };
        if target.hom_grading() != t.hom_grading() + 1 {
            continue;
        }
        let s = s_e(g, t, e)?;
        if s == 0 {
            continue;
        }
        out.push(DifferentialTerm {
            target: StGenerator::new(target.lex_rank, vec![1; component_count(g, target)]),
            coefficient: sign_of(xi(t, e)) * 2 * s,
        });
    }
    Ok(merge_terms(out))
}

fn merge_terms(terms: Vec<DifferentialTerm>) -> Vec<DifferentialTerm> {
    let mut acc: BTreeMap<StGenerator, i64> = BTreeMap::new();
    for t in terms {
        *acc.entry(t.target).or_insert(0) += t.coefficient;
    }
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(target, coefficient)| DifferentialTerm { target, coefficient })
        .collect()
}

fn apply_exchange(ex: &Exchange, exps: &[u32], m: u32) -> StGenerator {
    let mut target = vec![0u32; ex.target_slots];
    for (s, &x) in exps.iter().enumerate() {
        target[ex.slot_map[s]] += x;
    }
    debug_assert!(target[0] < m && target[1..].iter().all(|&x| (1..m).contains(&x)), "target is not critical");
    StGenerator::new(ex.target_tree, target)
}

fn differential_with(data: &TreeData, src: &StGenerator, m: u32) -> Vec<DifferentialTerm> {
    let exps = &src.exponents;
    let mut out = Vec::new();
    for ex in &data.exchanges {
        if exps[ex.near] + exps[ex.far] < m {
            out.push(DifferentialTerm { target: apply_exchange(ex, exps, m), coefficient: ex.sign });
        }
        for (from, onto) in [(ex.near, ex.far), (ex.far, ex.near)] {
            let path = data.layout.path_from_root(from);
            let k = path.len() - 1;
            for t in 0..k {
                if exps[path[t]] + exps[path[t + 1]] >= m {
                    continue;
                }
                // Push exponents one step toward the root along the path, emptying `from`.
                let mut moved = exps.clone();
                moved[path[t]] = exps[path[t]] + exps[path[t + 1]];
                for s in t + 1..k {
                    moved[path[s]] = exps[path[s + 1]];
                }
                moved[path[k]] = 0;
                debug_assert!(moved[onto] < m);
                out.push(DifferentialTerm {
                    target: apply_exchange(ex, &moved, m),
                    coefficient: ex.sign * sign_of(k - t),
                });
            }
        }
    }
    merge_terms(out)
}

/// The differential over `A_m` for any `m ≥ 2`.
pub fn differential_am(
    g: &OrderedGraph,
    trees: &NbcTrees,
    src: &StGenerator,
    m: u32,
) -> Result<Vec<DifferentialTerm>> {
    if m < 2 {
        return Err(Error::BadAlgebra(m));
    }
    let data = tree_data(g, trees, trees.get(src.tree));
    Ok(differential_with(&data, src, m))
}

/// The full spanning-tree complex of `g` over `A_m`.
pub fn assemble_complex(g: &OrderedGraph, m: u32) -> Result<BigradedComplex> {
    assemble_with_trees(g, &enumerate_nbc_trees(g), m)
}

pub fn assemble_with_trees(g: &OrderedGraph, trees: &NbcTrees, m: u32) -> Result<BigradedComplex> {
    let gens = generators(g, trees, m)?;
    let mut builder = ComplexBuilder::new(m);
    for gen in &gens {
        let i = trees.get(gen.tree).hom_grading();
        builder.add_generator(gen.clone(), i, gen.j(), gen.id());
    }
    let data: Vec<TreeData> = trees.iter().map(|t| tree_data(g, trees, t)).collect();
    for gen in &gens {
        for term in differential_with(&data[gen.tree], gen, m) {
            builder.add_term(gen, &term.target, term.coefficient);
        }
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn gen(tree: usize, exps: &[u32]) -> StGenerator {
        StGenerator::new(tree, exps.to_vec())
    }

    #[test]
    fn triangle_generators() {
        let g = corpus::triangle();
        let trees = enumerate_nbc_trees(&g);
        let m2 = generators(&g, &trees, 2).unwrap();
        assert_eq!(m2, vec![gen(0, &[0, 1, 1]), gen(0, &[1, 1, 1]), gen(1, &[0, 1]), gen(1, &[1, 1])]);
        let gradings: Vec<_> = m2.iter().map(|x| (trees.get(x.tree).hom_grading(), x.j())).collect();
        assert_eq!(gradings, vec![(0, 2), (0, 3), (1, 1), (1, 2)]);
        assert_eq!(generators(&g, &trees, 3).unwrap().len(), 18);
        assert_eq!(generators(&g, &trees, 1), Err(Error::BadAlgebra(1)));
    }

    #[test]
    fn xi_examples() {
        let g = corpus::worked_example();
        let trees = enumerate_nbc_trees(&g);
        assert_eq!(xi(trees.get(1), 5), 0);
        assert_eq!(xi(trees.get(3), 6), 1);
    }

    #[test]
    fn s_e_examples() {
        let g = corpus::triangle();
        let trees = enumerate_nbc_trees(&g);
        assert_eq!(s_e(&g, trees.get(0), 2).unwrap(), 1);
        // Cycle {1,2,3} for T2 = {1,3}: only edge 1 is live.
        assert_eq!(s_e(&g, trees.get(1), 1).unwrap(), 0);
    }

    #[test]
    fn triangle_differential() {
        let g = corpus::triangle();
        let trees = enumerate_nbc_trees(&g);
        let d = differential_m2(&g, &trees, &gen(0, &[0, 1, 1])).unwrap();
        assert_eq!(d, vec![DifferentialTerm { target: gen(1, &[1, 1]), coefficient: 2 }]);
        for x in [gen(0, &[1, 1, 1]), gen(1, &[0, 1]), gen(1, &[1, 1])] {
            assert!(differential_m2(&g, &trees, &x).unwrap().is_empty());
            assert!(differential_am(&g, &trees, &x, 2).unwrap().is_empty());
        }
        assert_eq!(differential_am(&g, &trees, &gen(0, &[0, 1, 1]), 2).unwrap(), d);
    }

    #[test]
    fn worked_example_incidences() {
        let g = corpus::worked_example();
        let trees = enumerate_nbc_trees(&g);
        let plus = |k: usize| gen(k - 1, &{
            let mut v = vec![1; component_count(&g, trees.get(k - 1))];
            v[0] = 0;
            v
        });
        let minus = |k: usize| gen(k - 1, &vec![1; component_count(&g, trees.get(k - 1))]);
        let d = |k: usize| differential_m2(&g, &trees, &plus(k)).unwrap();
        assert_eq!(d(1), vec![DifferentialTerm { target: minus(2), coefficient: -2 }]);
        assert!(d(2).is_empty());
        assert!(d(6).is_empty());
        assert_eq!(d(10).len(), 1);
        assert_eq!(d(10)[0].target, minus(12));
        assert_eq!(d(10)[0].coefficient.abs(), 2);
    }

    #[test]
    fn lex_max_tree_has_zero_differential() {
        for m in 2..=4 {
            let g = corpus::worked_example();
            let trees = enumerate_nbc_trees(&g);
            let last = trees.lex_max().lex_rank;
            for x in generators(&g, &trees, m).unwrap().iter().filter(|x| x.tree == last) {
                assert!(differential_am(&g, &trees, x, m).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn single_edge_complex() {
        for m in 2..=4 {
            let c = assemble_complex(&corpus::k2(), m).unwrap();
            assert_eq!(c.generator_count(), (m * (m - 1)) as usize);
            assert!(c.stripes.values().all(|s| s.matrices.iter().all(|d| d.is_zero())));
        }
    }

    #[test]
    fn triangle_stripe_matrix() {
        let c = assemble_complex(&corpus::triangle(), 2).unwrap();
        assert_eq!(c.matrix(0, 2).unwrap().to_dense(), vec![vec![2]]);
        c.check_d_squared().unwrap();
    }
}
