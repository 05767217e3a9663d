//! Bigraded cochain complexes with sparse integer differentials.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Column-major sparse integer matrix. Each column is sorted by row with no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Builds from `(row, col, value)` triplets, summing repeats and dropping zeros.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc[c].entry(r).or_insert(0) += v;
        }
        let columns = acc.into_iter().map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect()).collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let triplets = dense
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows, cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c].binary_search_by_key(&r, |&(row, _)| row).map_or(0, |k| self.columns[c][k].1)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut columns = Vec::with_capacity(rhs.cols);
        for col in &rhs.columns {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    *acc.entry(r).or_insert(0) += a * b;
                }
            }
            columns.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        SparseMatrix { rows: self.rows, cols: rhs.cols, columns }
    }
}

/// One quantum grading: chain groups by homological grading and the maps between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stripe {
    /// Generator labels, indexed by `i`.
    pub labels: Vec<Vec<String>>,
    /// `D_i : C_i → C_{i+1}`, indexed by `i`; length is `labels.len() - 1`.
    pub matrices: Vec<SparseMatrix>,
}

impl Stripe {
    pub fn dim(&self, i: usize) -> usize {
        self.labels.get(i).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    /// `D_i`, or `None` when either end is outside the stripe.
    pub fn matrix(&self, i: usize) -> Option<&SparseMatrix> {
        self.matrices.get(i)
    }
}

/// Integer cochain complex graded by `(i, j)` with a `j`-preserving, `i`-raising differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedComplex {
    pub m: u32,
    pub stripes: BTreeMap<usize, Stripe>,
}

impl BigradedComplex {
    pub fn stripe(&self, j: usize) -> Option<&Stripe> {
        self.stripes.get(&j)
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.stripes.get(&j).map_or(0, |s| s.dim(i))
    }

    pub fn labels(&self, i: usize, j: usize) -> &[String] {
        self.stripes.get(&j).and_then(|s| s.labels.get(i)).map_or(&[], Vec::as_slice)
    }

    /// `D_i` on stripe `j`.
    pub fn matrix(&self, i: usize, j: usize) -> Option<&SparseMatrix> {
        self.stripes.get(&j).and_then(|s| s.matrix(i))
    }

    pub fn generator_count(&self) -> usize {
        self.stripes.values().map(|s| s.dims().iter().sum::<usize>()).sum()
    }

    /// Nonzero chain groups as `((i, j), dim)`, ordered by `(i, j)`.
    pub fn dims(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (&j, s) in &self.stripes {
            for (i, d) in s.dims().into_iter().enumerate() {
                if d > 0 {
                    out.insert((i, j), d);
                }
            }
        }
        out
    }

    /// Verifies `D_{i+1} · D_i = 0` everywhere.
    pub fn check_d_squared(&self) -> Result<()> {
        for (&j, s) in &self.stripes {
            for i in 0..s.matrices.len().saturating_sub(1) {
                if !s.matrices[i + 1].mul(&s.matrices[i]).is_zero() {
                    return Err(Error::NotAComplex { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, model: &str) -> Value {
        let mut groups = Vec::new();
        let mut differentials = Vec::new();
        for (&j, s) in &self.stripes {
            for (i, labels) in s.labels.iter().enumerate() {
                if !labels.is_empty() {
                    groups.push(json!({"i": i, "j": j, "generators": labels}));
                }
            }
            for (i, d) in s.matrices.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let entries: Vec<[i64; 3]> = d.triplets().map(|(r, c, v)| [r as i64, c as i64, v]).collect();
                differentials.push(json!({
                    "i": i,
                    "j": j,
                    "cols": s.labels[i],
                    "rows": s.labels[i + 1],
                    "entries": entries,
                }));
            }
        }
        json!({"m": self.m, "model": model, "groups": groups, "differentials": differentials})
    }
}

/// Collects generators keyed by `K`, then differential terms between them.
/// Matrix entries `(row, col, value)` keyed by `(i, j)`.
type Entries = BTreeMap<(usize, usize), Vec<(usize, usize, i64)>>;

pub struct ComplexBuilder<K> {
    m: u32,
    position: HashMap<K, (usize, usize, usize)>,
    labels: BTreeMap<usize, Vec<Vec<String>>>,
    triplets: Entries,
}

impl<K: Hash + Eq> ComplexBuilder<K> {
    pub fn new(m: u32) -> Self {
        ComplexBuilder { m, position: HashMap::new(), labels: BTreeMap::new(), triplets: BTreeMap::new() }
    }

    pub fn add_generator(&mut self, key: K, i: usize, j: usize, label: String) {
        let stripe = self.labels.entry(j).or_default();
        if stripe.len() <= i {
            stripe.resize(i + 1, Vec::new());
        }
        let idx = stripe[i].len();
        stripe[i].push(label);
        let old = self.position.insert(key, (i, j, idx));
        assert!(old.is_none(), "generator added twice");
    }

    pub fn contains(&self, key: &K) -> bool {
        self.position.contains_key(key)
    }

    pub fn add_term(&mut self, from: &K, to: &K, coefficient: i64) {
        let (i, j, col) = self.position[from];
        let (ti, tj, row) = self.position[to];
        assert!(ti == i + 1 && tj == j, "differential must map (i,j) to (i+1,j)");
        self.triplets.entry((j, i)).or_default().push((row, col, coefficient));
    }

    pub fn build(mut self) -> BigradedComplex {
        let mut stripes = BTreeMap::new();
        for (j, labels) in self.labels {
            let matrices = (0..labels.len().saturating_sub(1))
                .map(|i| {
                    let t = self.triplets.remove(&(j, i)).unwrap_or_default();
                    SparseMatrix::from_triplets(labels[i + 1].len(), labels[i].len(), t)
                })
                .collect();
            stripes.insert(j, Stripe { labels, matrices });
        }
        BigradedComplex { m: self.m, stripes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 0, 2), (1, 0, 3), (0, 1, 4)]);
        assert_eq!(m.to_dense(), vec![vec![0, 4], vec![5, 0]]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 0), 5);
        assert_eq!(m.get(1, 1), 0);
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseMatrix::from_dense(&[vec![1, 2, 0], vec![0, -1, 3]]);
        let b = SparseMatrix::from_dense(&[vec![1, 0], vec![2, 1], vec![0, 4]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![5, 2], vec![-2, 11]]);
    }

    #[test]
    fn builder_and_d_squared() {
        let mut b = ComplexBuilder::new(2);
        b.add_generator("x", 0, 1, "x".into());
        b.add_generator("y", 1, 1, "y".into());
        b.add_generator("z", 2, 1, "z".into());
        b.add_term(&"x", &"y", 1);
        b.add_term(&"y", &"z", 1);
        let c = b.build();
        assert_eq!(c.dims().len(), 3);
        assert_eq!(c.check_d_squared(), Err(Error::NotAComplex { i: 0, j: 1 }));
    }
}
