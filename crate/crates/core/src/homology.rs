//! Integer homology of bigraded complexes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::BigradedComplex;
use crate::error::Result;
use crate::snf::invariant_factors;

/// A finitely generated abelian group `Z^free ⊕ Z/t1 ⊕ … ⊕ Z/tk`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free: usize,
    /// Invariant factors greater than one, ascending.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn has_factor(&self, n: u64) -> bool {
        self.torsion.iter().any(|t| *t == BigInt::from(n))
    }

    /// Direct sum; torsion is kept as a sorted multiset of factors.
    pub fn sum(&self, other: &HomologyGroup) -> HomologyGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        torsion.sort();
        HomologyGroup { free: self.free + other.free, torsion }
    }

    pub fn from_parts(free: usize, torsion: &[u64]) -> Self {
        let mut torsion: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
        torsion.sort();
        HomologyGroup { free, torsion }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        let mut k = 0;
        while k < self.torsion.len() {
            let t = &self.torsion[k];
            let run = self.torsion[k..].iter().take_while(|x| *x == t).count();
            parts.push(if run == 1 { format!("Z_{t}") } else { format!("Z_{t}^{run}") });
            k += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Nonzero homology groups indexed by `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub groups: BTreeMap<(usize, usize), HomologyGroup>,
}

impl HomologyTable {
    pub fn get(&self, i: usize, j: usize) -> HomologyGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Groups summed over `j`, indexed by `i`; zero groups omitted.
    pub fn by_i(&self) -> BTreeMap<usize, HomologyGroup> {
        let mut out: BTreeMap<usize, HomologyGroup> = BTreeMap::new();
        for (&(i, _), g) in &self.groups {
            let cur = out.entry(i).or_default();
            *cur = cur.sum(g);
        }
        out
    }

    /// Free ranks summed over `j`, for `i = 0..=max`.
    pub fn betti(&self) -> Vec<usize> {
        let by_i = self.by_i();
        let top = by_i.keys().next_back().map_or(0, |&i| i + 1);
        (0..top).map(|i| by_i.get(&i).map_or(0, |g| g.free)).collect()
    }

    /// Homological gradings carrying nonzero homology.
    pub fn nonzero_gradings(&self) -> Vec<usize> {
        self.by_i().keys().copied().collect()
    }

    pub fn torsion_factors(&self) -> impl Iterator<Item = &BigInt> {
        self.groups.values().flat_map(|g| g.torsion.iter())
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_factors().next().is_none()
    }

    pub fn to_json(&self, m: u32, model: &str) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .map(|(&(i, j), g)| {
                let torsion: Vec<Value> = g.torsion.iter().map(big_to_json).collect();
                json!({"i": i, "j": j, "free": g.free, "torsion": torsion})
            })
            .collect();
        json!({"m": m, "model": model, "groups": groups})
    }

    /// Plain-text table: one line per `(i, j)` and a per-`i` summary.
    pub fn render(&self) -> String {
        let mut out = String::from("i\tj\tgroup\n");
        for (&(i, j), g) in &self.groups {
            out.push_str(&format!("{i}\t{j}\t{g}\n"));
        }
        out.push_str("\ni\ttotal\n");
        for (i, g) in self.by_i() {
            out.push_str(&format!("{i}\t{g}\n"));
        }
        out
    }
}

/// JSON number for an arbitrary-size integer.
pub fn big_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => serde_json::from_str(&x.to_string()).expect("integer literal is valid JSON"),
    }
}

/// Homology of a complex, stripe by stripe. Fails if the differential does not square to zero.
pub fn homology(c: &BigradedComplex) -> Result<HomologyTable> {
    c.check_d_squared()?;
    let jobs: Vec<(usize, usize)> =
        c.stripes.iter().flat_map(|(&j, s)| (0..s.matrices.len()).map(move |i| (j, i))).collect();
    let factors: BTreeMap<(usize, usize), Vec<BigInt>> = jobs
        .par_iter()
        .map(|&(j, i)| ((j, i), invariant_factors(c.matrix(i, j).expect("job indexes an existing matrix"))))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut groups = BTreeMap::new();
    for (&j, s) in &c.stripes {
        let rank = |i: usize| factors.get(&(j, i)).map_or(0, Vec::len);
        for i in 0..s.labels.len() {
            let incoming = if i == 0 { 0 } else { rank(i - 1) };
            let free = s.dim(i) - rank(i) - incoming;
            let torsion: Vec<BigInt> = if i == 0 {
                Vec::new()
            } else {
                factors.get(&(j, i - 1)).map_or_else(Vec::new, |f| f.iter().filter(|x| !x.is_one()).cloned().collect())
            };
            let g = HomologyGroup { free, torsion };
            if !g.is_zero() {
                groups.insert((i, j), g);
            }
        }
    }
    Ok(HomologyTable { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexBuilder;
    use crate::error::Error;
    use crate::{corpus, st};

    #[test]
    fn triangle_spanning_tree_homology() {
        let h = homology(&st::assemble_complex(&corpus::triangle(), 2).unwrap()).unwrap();
        let expected: BTreeMap<_, _> = [
            ((0, 3), HomologyGroup::from_parts(1, &[])),
            ((1, 1), HomologyGroup::from_parts(1, &[])),
            ((1, 2), HomologyGroup::from_parts(0, &[2])),
        ]
        .into_iter()
        .collect();
        assert_eq!(h.groups, expected);
        assert_eq!(h.betti(), vec![1, 1]);
    }

    #[test]
    fn single_edge_is_free() {
        for m in 2..=4u32 {
            let h = homology(&st::assemble_complex(&corpus::k2(), m).unwrap()).unwrap();
            assert_eq!(h.betti(), vec![(m * (m - 1)) as usize]);
            assert!(h.is_torsion_free());
        }
    }

    #[test]
    fn rejects_non_complex() {
        let mut b = ComplexBuilder::new(2);
        for (k, i) in [0, 1, 2].into_iter().enumerate() {
            b.add_generator(k, i, 0, k.to_string());
        }
        b.add_term(&0, &1, 1);
        b.add_term(&1, &2, 1);
        assert_eq!(homology(&b.build()), Err(Error::NotAComplex { i: 0, j: 0 }));
    }

    #[test]
    fn display_and_json() {
        let g = HomologyGroup::from_parts(4, &[2, 2]);
        assert_eq!(g.to_string(), "Z^4 + Z_2^2");
        let mut t = HomologyTable::default();
        t.groups.insert((1, 2), g);
        assert_eq!(
            serde_json::to_string(&t.to_json(2, "oracle")).unwrap(),
            r#"{"groups":[{"free":4,"i":1,"j":2,"torsion":[2,2]}],"m":2,"model":"oracle"}"#
        );
    }
}
