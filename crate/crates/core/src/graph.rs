//! Ordered simple graphs, edge subsets, and tree-relative cut/cycle queries.
//!
//! Edges are addressed by their 0-based position in the order; the printed
//! label of edge `k` is `k + 1`. Vertices are dense indices into
//! [`OrderedGraph::vertex_names`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, GraphError, Result};

/// Hard cap imposed by the bitset representation of [`EdgeSubset`].
pub const MAX_EDGES: usize = 64;

/// A set of edges of one graph, stored as a bitset over edge positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSubset(u64);

impl EdgeSubset {
    pub const fn empty() -> Self {
        EdgeSubset(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        EdgeSubset(bits)
    }

    /// All edges `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << n) - 1)
        }
    }

    pub fn single(edge: usize) -> Self {
        EdgeSubset(1u64 << edge)
    }

    pub fn from_edges<I: IntoIterator<Item = usize>>(edges: I) -> Self {
        edges.into_iter().fold(Self::empty(), |s, e| s.with(e))
    }

    /// Build from 1-based labels, as printed in tables.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_edges(labels.into_iter().map(|l| l - 1))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, edge: usize) -> bool {
        edge < 64 && self.0 & (1u64 << edge) != 0
    }

    pub fn with(self, edge: usize) -> Self {
        EdgeSubset(self.0 | (1u64 << edge))
    }

    pub fn without(self, edge: usize) -> Self {
        EdgeSubset(self.0 & !(1u64 << edge))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        EdgeSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        EdgeSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        EdgeSubset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest edge, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest edge, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Number of members strictly below `edge`.
    pub fn count_below(self, edge: usize) -> usize {
        let mask = if edge >= 64 { u64::MAX } else { (1u64 << edge) - 1 };
        (self.0 & mask).count_ones() as usize
    }

    /// Edges in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|e| e + 1).collect()
    }

    /// Lexicographic comparison of the sorted label tuples.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.labels().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }
}

/// Connected components of the spanning subgraph on an edge subset.
///
/// Components are numbered by their smallest vertex index, so component 0
/// always contains vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    comp_of: Vec<usize>,
    count: usize,
    root_comp: usize,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn component_of(&self, vertex: usize) -> usize {
        self.comp_of[vertex]
    }

    pub fn root_component(&self) -> usize {
        self.root_comp
    }

    /// Slot of each vertex's component: the root component is slot 0 and the
    /// others follow in order of smallest vertex.
    pub fn vertex_slots(&self) -> Vec<usize> {
        self.comp_of
            .iter()
            .map(|&c| match c.cmp(&self.root_comp) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => c + 1,
                std::cmp::Ordering::Greater => c,
            })
            .collect()
    }

    /// Vertices of each component, in component order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.comp_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Biconnected-component decomposition: every edge lies in exactly one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<EdgeSubset>,
}

impl BlockDecomposition {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    name: Option<String>,
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
    root: Option<String>,
    order: Option<Vec<usize>>,
}

/// A connected simple graph with a total order on its edges and a root vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGraph {
    name: Option<String>,
    vertex_names: Vec<String>,
    edges: Vec<(usize, usize)>,
    root: usize,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl OrderedGraph {
    /// Validates and builds a graph from dense indices. `edges[k]` gets label `k + 1`.
    pub fn new(
        vertex_names: Vec<String>,
        edges: Vec<(usize, usize)>,
        root: usize,
    ) -> std::result::Result<Self, GraphError> {
        let n = vertex_names.len();
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut seen = HashSet::new();
        for name in &vertex_names {
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        if edges.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges(edges.len()));
        }
        if root >= n {
            return Err(GraphError::UnknownRoot(root.to_string()));
        }
        let mut pairs = HashSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::UnknownVertex(v.to_string()));
                }
            }
            if a == b {
                return Err(GraphError::Loop(vertex_names[a].clone()));
            }
            if !pairs.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge(
                    vertex_names[a].clone(),
                    vertex_names[b].clone(),
                ));
            }
            adjacency[a].push((b, k));
            adjacency[b].push((a, k));
        }
        let g = OrderedGraph { name: None, vertex_names, edges, root, adjacency };
        let parts = g.components(EdgeSubset::full(g.edge_count())).count();
        if parts != 1 {
            return Err(GraphError::Disconnected(parts));
        }
        Ok(g)
    }

    /// Builds a graph from vertex labels; the first vertex is the root unless given.
    pub fn from_names(
        vertices: &[&str],
        edges: &[(&str, &str)],
        root: Option<&str>,
    ) -> std::result::Result<Self, GraphError> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let edges: Vec<[String; 2]> =
            edges.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
        Self::from_parts(None, names, edges, root.map(str::to_string), None)
    }

    fn from_parts(
        name: Option<String>,
        vertices: Vec<String>,
        edges: Vec<[String; 2]>,
        root: Option<String>,
        order: Option<Vec<usize>>,
    ) -> std::result::Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |v: &String| index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex(v.clone()));
        let mut listed = Vec::with_capacity(edges.len());
        for [a, b] in &edges {
            listed.push((lookup(a)?, lookup(b)?));
        }
        let root = match root {
            Some(r) => *index.get(&r).ok_or(GraphError::UnknownRoot(r))?,
            None => 0,
        };
        let ordered = match order {
            Some(order) => apply_order(&listed, &order)?,
            None => listed,
        };
        let mut g = OrderedGraph::new(vertices, ordered, root)?;
        g.name = name;
        Ok(g)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.edge_count())
    }

    /// `(neighbor, edge)` pairs at a vertex.
    pub fn incident(&self, vertex: usize) -> &[(usize, usize)] {
        &self.adjacency[vertex]
    }

    /// Same graph with a different root.
    pub fn with_root(&self, root: &str) -> std::result::Result<Self, GraphError> {
        let r = self.vertex_index(root).ok_or_else(|| GraphError::UnknownRoot(root.to_string()))?;
        let mut g = self.clone();
        g.root = r;
        Ok(g)
    }

    /// Relabels edges: `order[k]` is the new 1-based label of the edge now labeled `k + 1`.
    pub fn with_order(&self, order: &[usize]) -> std::result::Result<Self, GraphError> {
        let edges = apply_order(&self.edges, order)?;
        let mut g = OrderedGraph::new(self.vertex_names.clone(), edges, self.root)?;
        g.name = self.name.clone();
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Connected components of the spanning subgraph with edge set `s`.
    pub fn components(&self, s: EdgeSubset) -> ComponentPartition {
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        for e in s.iter() {
            let (a, b) = self.edges[e];
            uf.union(a, b);
        }
        let mut label = vec![usize::MAX; n];
        let mut comp_of = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = uf.find(v);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            comp_of[v] = label[r];
        }
        let root_comp = comp_of[self.root];
        ComponentPartition { comp_of, count, root_comp }
    }

    pub fn is_spanning_tree(&self, t: EdgeSubset) -> bool {
        t.is_subset(self.all_edges())
            && t.len() + 1 == self.vertex_count()
            && self.components(t).count() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + 1 == self.vertex_count()
    }

    /// Edges joining the two sides of `t - e`; always contains `e`.
    pub fn cut_set(&self, t: EdgeSubset, e: usize) -> Result<EdgeSubset> {
        if !t.contains(e) {
            return Err(Error::EdgeNotInTree(e + 1));
        }
        let parts = self.components(t.without(e));
        Ok(EdgeSubset::from_edges((0..self.edge_count()).filter(|&k| {
            let (a, b) = self.edges[k];
            parts.component_of(a) != parts.component_of(b)
        })))
    }

    /// The fundamental cycle of `f` with respect to `t`, including `f`.
    pub fn cycle_set(&self, t: EdgeSubset, f: usize) -> Result<EdgeSubset> {
        if t.contains(f) {
            return Err(Error::EdgeInTree(f + 1));
        }
        let (a, b) = self.edges[f];
        Ok(EdgeSubset::from_edges(self.unique_path(t, a, b)).with(f))
    }

    /// Edges of the `u`–`v` path in the tree `t`, in walking order.
    pub fn unique_path(&self, t: EdgeSubset, u: usize, v: usize) -> Vec<usize> {
        if u == v {
            return Vec::new();
        }
        let n = self.vertex_count();
        let mut via = vec![None; n];
        let mut seen = vec![false; n];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &(y, e) in &self.adjacency[x] {
                if t.contains(e) && !seen[y] {
                    seen[y] = true;
                    via[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = v;
        while let Some((prev, e)) = via[cur] {
            path.push(e);
            cur = prev;
        }
        path.reverse();
        path
    }

    /// Biconnected components; blocks are listed by their smallest edge.
    pub fn blocks(&self) -> BlockDecomposition {
        let n = self.vertex_count();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut stack: Vec<usize> = Vec::new();
        let mut blocks = Vec::new();
        // Iterative DFS: (vertex, parent edge, next adjacency slot)
        let mut dfs: Vec<(usize, Option<usize>, usize)> = Vec::new();
        for start in 0..n {
            if disc[start] != usize::MAX {
                continue;
            }
            disc[start] = time;
            low[start] = time;
            time += 1;
            dfs.push((start, None, 0));
            while let Some(&mut (v, pe, ref mut slot)) = dfs.last_mut() {
                if *slot < self.adjacency[v].len() {
                    let (w, e) = self.adjacency[v][*slot];
                    *slot += 1;
                    if Some(e) == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        stack.push(e);
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        dfs.push((w, Some(e), 0));
                    } else if disc[w] < disc[v] {
                        stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    dfs.pop();
                    if let (Some(&(u, _, _)), Some(e)) = (dfs.last(), pe) {
                        low[u] = low[u].min(low[v]);
                        if low[v] >= disc[u] {
                            let mut block = EdgeSubset::empty();
                            while let Some(x) = stack.pop() {
                                block = block.with(x);
                                if x == e {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        blocks.sort_by_key(|b| EdgeSubset::min(*b));
        BlockDecomposition { blocks }
    }
}

fn apply_order(
    listed: &[(usize, usize)],
    order: &[usize],
) -> std::result::Result<Vec<(usize, usize)>, GraphError> {
    if order.len() != listed.len() {
        return Err(GraphError::BadOrder(format!(
            "expected {} labels, got {}",
            listed.len(),
            order.len()
        )));
    }
    let mut out = vec![None; listed.len()];
    for (pos, &label) in order.iter().enumerate() {
        if label == 0 || label > listed.len() {
            return Err(GraphError::BadOrder(format!("label {label} out of range")));
        }
        if out[label - 1].replace(listed[pos]).is_some() {
            return Err(GraphError::BadOrder(format!("label {label} used twice")));
        }
    }
    Ok(out.into_iter().map(|e| e.expect("permutation covers every label")).collect())
}

/// Parses the JSON graph document format.
pub fn parse_graph(text: &str) -> std::result::Result<OrderedGraph, GraphError> {
    let doc: GraphDocument =
        serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
    OrderedGraph::from_parts(doc.name, doc.vertices, doc.edges, doc.root, doc.order)
}

/// Serializes back into the document format (identity order).
pub fn to_document(g: &OrderedGraph) -> serde_json::Value {
    let names = g.vertex_names();
    serde_json::json!({
        "name": g.name(),
        "vertices": names,
        "edges": g.edges().iter().map(|&(a, b)| [&names[a], &names[b]]).collect::<Vec<_>>(),
        "root": names[g.root()],
    })
}
