//! Integer polynomials, the chromatic polynomial two ways, and graded Euler characteristics.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::complex::BigradedComplex;
use crate::error::Result;
use crate::graph::OrderedGraph;
use crate::homology::{big_to_json, homology, HomologyTable};
use crate::st::assemble_complex;
use crate::trees::NbcTrees;

/// Polynomial in one variable with arbitrary-size integer coefficients; index is degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `c · x^degree`.
    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coefficients = vec![BigInt::zero(); degree + 1];
        coefficients[degree] = c.into();
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `p(q)` with `q = x + shift`, i.e. substitutes `x ↦ x + shift`.
    pub fn shift(&self, shift: i64) -> Self {
        let base = Self::from_i64(&[shift, 1]);
        let mut out = Self::zero();
        for c in self.coefficients.iter().rev() {
            out = &(&out * &base) + &Self::new(vec![c.clone()]);
        }
        out
    }

    pub fn to_json(&self, variable: &str) -> Value {
        let coefficients: Vec<Value> = self.coefficients.iter().map(big_to_json).collect();
        json!({"variable": variable, "coefficients": coefficients})
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let show_mag = !mag.is_one() || d == 0;
            match (show_mag, d) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}x")?,
                (false, 1) => f.write_str("x")?,
                (true, _) => write!(f, "{mag}x^{d}")?,
                (false, _) => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        let get = |p: &IntPolynomial, k: usize| p.coefficients.get(k).cloned().unwrap_or_default();
        IntPolynomial::new((0..n).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &-rhs
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (a, x) in self.coefficients.iter().enumerate() {
            for (b, y) in rhs.coefficients.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        IntPolynomial::new(out)
    }
}

/// Simple graph on `0..n` with sorted, deduplicated edges `(a, b)`, `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        SimpleGraph { n, edges }
    }

    fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Removes vertex `v`, renumbering the rest.
    fn without_vertex(&self, v: usize) -> Self {
        let re = |x: usize| if x > v { x - 1 } else { x };
        SimpleGraph::new(self.n - 1, self.edges.iter().filter(|&&(a, b)| a != v && b != v).map(|&(a, b)| (re(a), re(b))))
    }

    /// Relabeling by iterated degree refinement; ties keep the original order.
    ///
    /// Isomorphic graphs usually, but not always, get the same key. Different keys only cost
    /// a memo miss; equal keys always mean equal graphs.
    fn memo_key(&self) -> Self {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut color: Vec<usize> = self.degrees();
        for _ in 0..self.n {
            let sig: Vec<(usize, Vec<usize>)> = (0..self.n)
                .map(|v| {
                    let mut ns: Vec<usize> = adj[v].iter().map(|&u| color[u]).collect();
                    ns.sort_unstable();
                    (color[v], ns)
                })
                .collect();
            let mut distinct = sig.clone();
            distinct.sort();
            distinct.dedup();
            let classes = color.iter().collect::<std::collections::HashSet<_>>().len();
            color = sig.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
            if distinct.len() == classes {
                break;
            }
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (color[v], v));
        let mut pos = vec![0; self.n];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        SimpleGraph::new(self.n, self.edges.iter().map(|&(a, b)| (pos[a], pos[b])))
    }
}

fn lambda_minus(k: i64) -> IntPolynomial {
    IntPolynomial::from_i64(&[-k, 1])
}

fn deletion_contraction(g: SimpleGraph, memo: &mut HashMap<SimpleGraph, IntPolynomial>) -> IntPolynomial {
    if g.edges.is_empty() {
        return IntPolynomial::monomial(1, g.n);
    }
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return &IntPolynomial::monomial(1, 1) * &deletion_contraction(g.without_vertex(v), memo);
    }
    if let Some(v) = degrees.iter().position(|&d| d == 1) {
        return &lambda_minus(1) * &deletion_contraction(g.without_vertex(v), memo);
    }
    let key = g.memo_key();
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let (a, b) = key.edges[0];
    let deleted = SimpleGraph::new(key.n, key.edges[1..].iter().copied());
    let merge = |x: usize| {
        let x = if x == b { a } else { x };
        if x > b {
            x - 1
        } else {
            x
        }
    };
    let contracted = SimpleGraph::new(key.n - 1, key.edges[1..].iter().map(|&(x, y)| (merge(x), merge(y))));
    let p = &deletion_contraction(deleted, memo) - &deletion_contraction(contracted, memo);
    memo.insert(key, p.clone());
    p
}

/// `P(G, λ)` by deletion–contraction with memoization.
pub fn chromatic_poly_deletion_contraction(g: &OrderedGraph) -> IntPolynomial {
    deletion_contraction(SimpleGraph::new(g.vertex_count(), g.edges().iter().copied()), &mut HashMap::new())
}

/// `P(G, λ) = (−1)^{n−1} λ Σ_i t_i (1 − λ)^i`, with `t_i` the NBC trees having `i` live edges.
pub fn chromatic_poly_nbc(g: &OrderedGraph, trees: &NbcTrees) -> IntPolynomial {
    let one_minus = IntPolynomial::from_i64(&[1, -1]);
    let mut sum = IntPolynomial::zero();
    for (i, &t) in trees.live_counts().iter().enumerate() {
        sum = &sum + &(&IntPolynomial::monomial(t as i64, 0) * &one_minus.pow(i));
    }
    let sign = if (g.vertex_count() - 1).is_multiple_of(2) { 1 } else { -1 };
    &IntPolynomial::monomial(sign, 1) * &sum
}

/// `Σ (−1)^i q^j dim C_{i,j}`.
pub fn graded_euler_characteristic(c: &BigradedComplex) -> IntPolynomial {
    let mut out = IntPolynomial::zero();
    for ((i, j), d) in c.dims() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out = &out + &IntPolynomial::monomial(sign * d as i64, j);
    }
    out
}

/// `Σ (−1)^i q^j rank H_{i,j}`.
pub fn euler_from_homology(h: &HomologyTable) -> IntPolynomial {
    let mut out = IntPolynomial::zero();
    for (&(i, j), g) in &h.groups {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out = &out + &IntPolynomial::monomial(sign * g.free as i64, j);
    }
    out
}

/// Betti numbers of two rooted graphs and of their one-point union at the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethReport {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub glued: Vec<usize>,
    /// Convolution of `left` and `right`.
    pub predicted: Vec<usize>,
}

impl KunnethReport {
    pub fn holds(&self) -> bool {
        self.glued == self.predicted
    }
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Compares the rational Betti numbers of `g1 ∨ g2` with the convolution of the factors'.
pub fn kunneth_rational_check(g1: &OrderedGraph, g2: &OrderedGraph, m: u32) -> Result<KunnethReport> {
    let betti = |g: &OrderedGraph| -> Result<Vec<usize>> { Ok(homology(&assemble_complex(g, m)?)?.betti()) };
    let left = betti(g1)?;
    let right = betti(g2)?;
    let glued = betti(&crate::corpus::wedge(g1, g2))?;
    let predicted = convolve(&left, &right);
    Ok(KunnethReport { left, right, glued, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::trees::enumerate_nbc_trees;

    /// Proper colorings with `k` colors, by exhaustive search.
    fn count_colorings(g: &OrderedGraph, k: usize) -> BigInt {
        let n = g.vertex_count();
        let mut colors = vec![0usize; n];
        let mut count = 0u64;
        if k == 0 {
            return BigInt::zero();
        }
        loop {
            if g.edges().iter().all(|&(a, b)| colors[a] != colors[b]) {
                count += 1;
            }
            let mut v = 0;
            loop {
                if v == n {
                    return BigInt::from(count);
                }
                colors[v] += 1;
                if colors[v] < k {
                    break;
                }
                colors[v] = 0;
                v += 1;
            }
        }
    }

    #[test]
    fn arithmetic() {
        let p = IntPolynomial::from_i64(&[1, 1]);
        assert_eq!(&p * &p, IntPolynomial::from_i64(&[1, 2, 1]));
        assert_eq!(&p - &p, IntPolynomial::zero());
        assert_eq!(p.pow(3).eval(&BigInt::from(2)), BigInt::from(27));
        assert_eq!(IntPolynomial::from_i64(&[0, 0, 1]).shift(1), IntPolynomial::from_i64(&[1, 2, 1]));
        assert_eq!(IntPolynomial::from_i64(&[0, 2, -3, 1]).to_string(), "x^3 - 3x^2 + 2x");
        assert_eq!(IntPolynomial::from_i64(&[1, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn small_chromatic_polynomials() {
        assert_eq!(chromatic_poly_deletion_contraction(&corpus::k2()), IntPolynomial::from_i64(&[0, -1, 1]));
        assert_eq!(chromatic_poly_deletion_contraction(&corpus::triangle()), IntPolynomial::from_i64(&[0, 2, -3, 1]));
        assert_eq!(chromatic_poly_deletion_contraction(&corpus::single_vertex()), IntPolynomial::from_i64(&[0, 1]));
        for g in [corpus::k2(), corpus::triangle(), corpus::single_vertex()] {
            assert_eq!(chromatic_poly_nbc(&g, &enumerate_nbc_trees(&g)), chromatic_poly_deletion_contraction(&g));
        }
    }

    #[test]
    fn worked_example_polynomial() {
        let g = corpus::worked_example();
        let p = chromatic_poly_deletion_contraction(&g);
        assert!(p.eval(&BigInt::from(2)).is_zero());
        for k in 0..=8 {
            assert_eq!(p.eval(&BigInt::from(k)), count_colorings(&g, k as usize));
        }
        assert_eq!(chromatic_poly_nbc(&g, &enumerate_nbc_trees(&g)), p);
    }

    #[test]
    fn polynomials_match_colorings_on_corpus() {
        for g in corpus::connected_graphs(5) {
            let p = chromatic_poly_deletion_contraction(&g);
            for k in 0..=6 {
                assert_eq!(p.eval(&BigInt::from(k)), count_colorings(&g, k as usize), "{:?}", g.name());
            }
            assert_eq!(chromatic_poly_nbc(&g, &enumerate_nbc_trees(&g)), p);
        }
    }

    #[test]
    fn triangle_euler_characteristic() {
        let c = assemble_complex(&corpus::triangle(), 2).unwrap();
        let chi = graded_euler_characteristic(&c);
        assert_eq!(chi, IntPolynomial::from_i64(&[0, -1, 0, 1]));
        assert_eq!(chi, chromatic_poly_deletion_contraction(&corpus::triangle()).shift(1));
        assert_eq!(euler_from_homology(&homology(&c).unwrap()), chi);
    }

    #[test]
    fn convolution() {
        assert_eq!(convolve(&[1, 1], &[1, 1]), vec![1, 2, 1]);
        assert_eq!(convolve(&[2], &[2]), vec![4]);
    }

    #[test]
    fn kunneth_report_values() {
        let r = kunneth_rational_check(&corpus::triangle(), &corpus::triangle(), 2).unwrap();
        assert_eq!(r.glued, vec![1, 2, 1]);
        assert!(r.holds());
        let r = kunneth_rational_check(&corpus::k2(), &corpus::k2(), 2).unwrap();
        assert_eq!((r.glued.clone(), r.predicted.clone()), (vec![2], vec![4]));
        assert!(!r.holds());
    }
}
