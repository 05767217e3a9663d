//! Brute-force chromatic complex over `A_m` built from enhanced spanning subgraphs.

use std::collections::BTreeMap;

use crate::complex::{BigradedComplex, ComplexBuilder};
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, OrderedGraph};
use crate::trees::contains_broken_circuit;

/// Default maximum edge count for the oracle.
pub const ORACLE_EDGE_LIMIT: usize = 16;

/// Environment variable overriding [`ORACLE_EDGE_LIMIT`].
pub const GUARD_ENV: &str = "CHROMAHOM_GUARD_EDGES";

/// The oracle edge limit, honoring the environment override.
pub fn configured_edge_limit() -> usize {
    std::env::var(GUARD_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(ORACLE_EDGE_LIMIT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub m: u32,
    /// Restrict to subgraphs containing no broken circuit.
    pub nbc_only: bool,
    pub edge_limit: usize,
}

impl OracleConfig {
    pub fn new(m: u32, nbc_only: bool) -> Self {
        OracleConfig { m, nbc_only, edge_limit: configured_edge_limit() }
    }

    pub fn unlimited(mut self) -> Self {
        self.edge_limit = usize::MAX;
        self
    }

    fn check(&self, g: &OrderedGraph) -> Result<()> {
        if self.m < 2 {
            return Err(Error::BadAlgebra(self.m));
        }
        if g.edge_count() > self.edge_limit {
            return Err(Error::LimitExceeded { what: "oracle", limit: self.edge_limit, actual: g.edge_count() });
        }
        Ok(())
    }
}

/// A spanning subgraph with an exponent on each of its components.
///
/// Components are ordered like the tree complex: root component first, then by smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    pub subgraph: EdgeSubset,
    pub coloring: Vec<u32>,
}

impl EnhancedState {
    pub fn i(&self) -> usize {
        self.subgraph.len()
    }

    pub fn j(&self) -> usize {
        self.coloring.iter().map(|&x| x as usize).sum()
    }

    pub fn id(&self) -> String {
        let exps: Vec<String> = self.coloring.iter().map(u32::to_string).collect();
        format!("H{:?}^({})", self.subgraph, exps.join(","))
    }
}

fn subgraphs(g: &OrderedGraph, nbc_only: bool) -> Vec<EdgeSubset> {
    let mut out: Vec<EdgeSubset> = (0u64..(1u64 << g.edge_count()))
        .map(EdgeSubset::from_bits)
        .filter(|&h| !nbc_only || !contains_broken_circuit(g, h))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
    out
}

fn colorings(count: usize, m: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (m as usize).pow(count as u32);
    (0..total).map(move |mut code| {
        let mut c = vec![0; count];
        for slot in c.iter_mut().rev() {
            *slot = (code % m as usize) as u32;
            code /= m as usize;
        }
        c
    })
}

/// Every enhanced state, grouped by `(i, j)`; within a group ordered by subgraph then coloring.
pub fn enumerate_states(g: &OrderedGraph, cfg: &OracleConfig) -> Result<BTreeMap<(usize, usize), Vec<EnhancedState>>> {
    cfg.check(g)?;
    let mut out: BTreeMap<(usize, usize), Vec<EnhancedState>> = BTreeMap::new();
    for h in subgraphs(g, cfg.nbc_only) {
        for coloring in colorings(g.components(h).count(), cfg.m) {
            let s = EnhancedState { subgraph: h, coloring };
            out.entry((s.i(), s.j())).or_default().push(s);
        }
    }
    Ok(out)
}

/// Where each component slot of `h` lands after adding edge `e`, and the new slot count.
fn transfer(g: &OrderedGraph, from: &[usize], h: EdgeSubset, e: usize) -> (Vec<usize>, usize) {
    let after = g.components(h.with(e)).vertex_slots();
    let count = after.iter().max().map_or(0, |&x| x + 1);
    let mut map = vec![0; from.iter().max().map_or(0, |&x| x + 1)];
    for (v, &s) in from.iter().enumerate() {
        map[s] = after[v];
    }
    (map, count)
}

fn apply(map: &[usize], count: usize, coloring: &[u32], m: u32) -> Option<Vec<u32>> {
    let mut out = vec![0; count];
    for (s, &x) in coloring.iter().enumerate() {
        out[map[s]] += x;
    }
    out.iter().all(|&x| x < m).then_some(out)
}

fn sign(h: EdgeSubset, e: usize) -> i64 {
    if h.count_below(e).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The chromatic differential of one state: one term per edge outside the subgraph.
pub fn oracle_differential(g: &OrderedGraph, cfg: &OracleConfig, s: &EnhancedState) -> Vec<(EnhancedState, i64)> {
    let from = g.components(s.subgraph).vertex_slots();
    let mut out = Vec::new();
    for e in g.all_edges().difference(s.subgraph).iter() {
        let h = s.subgraph.with(e);
        if cfg.nbc_only && contains_broken_circuit(g, h) {
            continue;
        }
        let (map, count) = transfer(g, &from, s.subgraph, e);
        if let Some(coloring) = apply(&map, count, &s.coloring, cfg.m) {
            out.push((EnhancedState { subgraph: h, coloring }, sign(s.subgraph, e)));
        }
    }
    out
}

/// The oracle chain complex, full or restricted to NBC subgraphs.
pub fn assemble_oracle(g: &OrderedGraph, cfg: &OracleConfig) -> Result<BigradedComplex> {
    cfg.check(g)?;
    let hs = subgraphs(g, cfg.nbc_only);
    let mut builder = ComplexBuilder::new(cfg.m);
    let slots: Vec<Vec<usize>> = hs.iter().map(|&h| g.components(h).vertex_slots()).collect();
    for (&h, from) in hs.iter().zip(&slots) {
        let count = from.iter().max().map_or(0, |&x| x + 1);
        for coloring in colorings(count, cfg.m) {
            let s = EnhancedState { subgraph: h, coloring };
            let (i, j, id) = (s.i(), s.j(), s.id());
            builder.add_generator(s, i, j, id);
        }
    }
    for (&h, from) in hs.iter().zip(&slots) {
        let count = from.iter().max().map_or(0, |&x| x + 1);
        let moves: Vec<_> = g
            .all_edges()
            .difference(h)
            .iter()
            .filter(|&e| !cfg.nbc_only || !contains_broken_circuit(g, h.with(e)))
            .map(|e| (e, transfer(g, from, h, e)))
            .collect();
        for coloring in colorings(count, cfg.m) {
            let s = EnhancedState { subgraph: h, coloring };
            for (e, (map, to_count)) in &moves {
                if let Some(c) = apply(map, *to_count, &s.coloring, cfg.m) {
                    let t = EnhancedState { subgraph: h.with(*e), coloring: c };
                    builder.add_term(&s, &t, sign(h, *e));
                }
            }
        }
    }
    Ok(builder.build())
}
