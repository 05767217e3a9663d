//! Theorem checks on a single graph, plus structural properties used by the test suites.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::complex::BigradedComplex;
use crate::corpus;
use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::homology::{homology, HomologyTable};
use crate::oracle::{assemble_oracle, OracleConfig};
use crate::poly::{
    chromatic_poly_deletion_contraction, chromatic_poly_nbc, euler_from_homology, graded_euler_characteristic,
    kunneth_rational_check,
};
use crate::st::{assemble_with_trees, component_count, generators};
use crate::trees::{enumerate_nbc_trees, enumerate_spanning_trees, psi_e, psi_prime_e, shelling_partition, shelling_violation, NbcTrees, TreeRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Euler,
    Poly,
    Span,
    Torsion,
    OracleEq,
    Diagonals,
    Partition,
    DSquare,
    LexmaxZ2,
    Kunneth,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Euler,
        Check::Poly,
        Check::Span,
        Check::Torsion,
        Check::OracleEq,
        Check::Diagonals,
        Check::Partition,
        Check::DSquare,
        Check::LexmaxZ2,
        Check::Kunneth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Euler => "euler",
            Check::Poly => "poly",
            Check::Span => "span",
            Check::Torsion => "torsion",
            Check::OracleEq => "oracle-eq",
            Check::Diagonals => "diagonals",
            Check::Partition => "partition",
            Check::DSquare => "dsquare",
            Check::LexmaxZ2 => "lexmax-z2",
            Check::Kunneth => "kunneth",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply to this input.
    Skip,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

/// Edge-count guards for the exponential stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub oracle_edges: usize,
    pub shelling_edges: usize,
}

impl Limits {
    pub fn configured() -> Self {
        Limits {
            oracle_edges: crate::oracle::configured_edge_limit(),
            shelling_edges: crate::trees::SHELLING_EDGE_LIMIT,
        }
    }

    pub fn unlimited() -> Self {
        Limits { oracle_edges: usize::MAX, shelling_edges: usize::MAX }
    }
}

/// Runs checks on one graph and `m`, sharing the spanning-tree complex and its homology.
pub struct Verifier<'g> {
    g: &'g OrderedGraph,
    m: u32,
    limits: Limits,
    trees: NbcTrees,
    complex: OnceCell<BigradedComplex>,
    homology: OnceCell<HomologyTable>,
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn first_difference(a: &HomologyTable, b: &HomologyTable) -> Option<(usize, usize)> {
    a.groups.keys().chain(b.groups.keys()).copied().find(|&(i, j)| a.get(i, j) != b.get(i, j))
}

impl<'g> Verifier<'g> {
    pub fn new(g: &'g OrderedGraph, m: u32, limits: Limits) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadAlgebra(m));
        }
        Ok(Verifier {
            g,
            m,
            limits,
            trees: enumerate_nbc_trees(g),
            complex: OnceCell::new(),
            homology: OnceCell::new(),
        })
    }

    pub fn trees(&self) -> &NbcTrees {
        &self.trees
    }

    pub fn complex(&self) -> Result<&BigradedComplex> {
        if let Some(c) = self.complex.get() {
            return Ok(c);
        }
        let c = assemble_with_trees(self.g, &self.trees, self.m)?;
        Ok(self.complex.get_or_init(|| c))
    }

    pub fn homology(&self) -> Result<&HomologyTable> {
        if let Some(h) = self.homology.get() {
            return Ok(h);
        }
        let h = homology(self.complex()?)?;
        Ok(self.homology.get_or_init(|| h))
    }

    fn oracle(&self, nbc_only: bool) -> Result<BigradedComplex> {
        let cfg = OracleConfig { m: self.m, nbc_only, edge_limit: self.limits.oracle_edges };
        assemble_oracle(self.g, &cfg)
    }

    pub fn run(&self, check: Check) -> Result<CheckOutcome> {
        let start = Instant::now();
        let (status, detail) = match check {
            Check::Euler => self.euler()?,
            Check::Poly => self.poly(),
            Check::Span => self.span()?,
            Check::Torsion => self.torsion()?,
            Check::OracleEq => self.oracle_eq()?,
            Check::Diagonals => self.diagonals()?,
            Check::Partition => self.partition()?,
            Check::DSquare => self.d_squared()?,
            Check::LexmaxZ2 => self.lexmax_z2()?,
            Check::Kunneth => self.kunneth()?,
        };
        Ok(CheckOutcome { check, status, detail, seconds: start.elapsed().as_secs_f64() })
    }

    fn euler(&self) -> Result<(Status, String)> {
        let chi = graded_euler_characteristic(self.complex()?);
        let from_h = euler_from_homology(self.homology()?);
        let p = chromatic_poly_deletion_contraction(self.g);
        let at_one = chi.eval(&BigInt::one());
        let p_m = p.eval(&BigInt::from(self.m));
        let mut ok = chi == from_h && at_one == p_m;
        let mut detail = format!("chi_q = {chi}; chi(1) = {at_one}, P(m) = {p_m}");
        if self.m == 2 {
            let shifted = p.shift(1);
            ok &= chi == shifted;
            detail.push_str(&format!("; P(1+q) = {shifted}"));
        }
        if chi != from_h {
            detail.push_str(&format!("; from homology = {from_h}"));
        }
        Ok((verdict(ok), detail))
    }

    fn poly(&self) -> (Status, String) {
        let dc = chromatic_poly_deletion_contraction(self.g);
        let nbc = chromatic_poly_nbc(self.g, &self.trees);
        let detail = if dc == nbc { format!("P = {dc}") } else { format!("deletion-contraction {dc} != NBC {nbc}") };
        (verdict(dc == nbc), detail)
    }

    fn span(&self) -> Result<(Status, String)> {
        let gradings = self.homology()?.nonzero_gradings();
        let blocks = self.g.blocks().count();
        let top = self.g.vertex_count() - blocks - 1;
        let ok = gradings.first() == Some(&0) && gradings.last() == Some(&top);
        let detail = format!(
            "nonzero gradings {gradings:?}; v - b = {} - {} = {}",
            self.g.vertex_count(),
            blocks,
            self.g.vertex_count() - blocks
        );
        Ok((verdict(ok), detail))
    }

    fn torsion(&self) -> Result<(Status, String)> {
        let h = self.homology()?;
        if self.g.is_forest() {
            let ok = h.is_torsion_free();
            return Ok((verdict(ok), "torsion-free: graph is a forest".into()));
        }
        let m = BigInt::from(self.m);
        let witness = h.groups.iter().find_map(|(&(i, j), g)| {
            g.torsion.iter().find(|t| !t.gcd(&m).is_one()).map(|t| (i, j, t.clone()))
        });
        Ok(match witness {
            Some((i, j, t)) => (Status::Pass, format!("invariant factor {t} at (i={i}, j={j}) shares a divisor with {m}")),
            None => (Status::Fail, format!("no invariant factor shares a divisor with {m}")),
        })
    }

    fn oracle_eq(&self) -> Result<(Status, String)> {
        let st = self.homology()?;
        let full = homology(&self.oracle(false)?)?;
        let nbc = homology(&self.oracle(true)?)?;
        if let Some((i, j)) = first_difference(st, &full) {
            return Ok((Status::Fail, format!("(i={i}, j={j}): spanning-tree {} vs oracle {}", st.get(i, j), full.get(i, j))));
        }
        if let Some((i, j)) = first_difference(&full, &nbc) {
            return Ok((Status::Fail, format!("(i={i}, j={j}): oracle {} vs NBC oracle {}", full.get(i, j), nbc.get(i, j))));
        }
        Ok((Status::Pass, format!("{} bigraded groups agree across all three models", st.groups.len())))
    }

    fn diagonals(&self) -> Result<(Status, String)> {
        if self.m != 2 {
            return Ok((Status::Skip, "two-diagonal support is an m = 2 statement".into()));
        }
        Ok(match properties::two_diagonals(self.g, &self.trees) {
            Ok(()) => (Status::Pass, format!("all generators on i + j in {{{}, {}}}", self.g.vertex_count() - 1, self.g.vertex_count())),
            Err(w) => (Status::Fail, w),
        })
    }

    fn partition(&self) -> Result<(Status, String)> {
        let p = shelling_partition(self.g, &self.trees, self.limits.shelling_edges)?;
        let mut problems = Vec::new();
        if !p.is_partition() {
            let bad = p.cover.iter().find(|(_, v)| v.len() != 1).map(|(s, v)| format!("{s:?} covered {} times", v.len()));
            problems.push(bad.unwrap_or_else(|| format!("{} interval members are not NBC", p.stray.len())));
        }
        if let Some((i, j)) = shelling_violation(&self.trees) {
            problems.push(format!("shelling fails for T{} < T{}", i + 1, j + 1));
        }
        if let Err(w) = properties::lex_min_fully_active(&self.trees) {
            problems.push(w);
        }
        if problems.is_empty() {
            Ok((Status::Pass, format!("{} NBC sets in {} intervals [IN(T), T]", p.cover.len(), self.trees.len())))
        } else {
            Ok((Status::Fail, problems.join("; ")))
        }
    }

    fn d_squared(&self) -> Result<(Status, String)> {
        let mut models = vec![("spanning-tree", self.complex()?.check_d_squared())];
        for (name, nbc_only) in [("oracle", false), ("oracle-nbc", true)] {
            models.push((name, self.oracle(nbc_only)?.check_d_squared()));
        }
        let failures: Vec<String> =
            models.iter().filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}"))).collect();
        if failures.is_empty() {
            Ok((Status::Pass, "spanning-tree, oracle and NBC oracle all square to zero".into()))
        } else {
            Ok((Status::Fail, failures.join("; ")))
        }
    }

    fn lexmax_z2(&self) -> Result<(Status, String)> {
        if self.g.is_forest() {
            return Ok((Status::Skip, "graph has no cycle".into()));
        }
        let h = if self.m == 2 { self.homology()?.clone() } else { homology(&assemble_with_trees(self.g, &self.trees, 2)?)? };
        let top = self.trees.lex_max();
        let i = top.hom_grading();
        let group = h.by_i().remove(&i).unwrap_or_default();
        let ok = group.has_factor(2);
        Ok((verdict(ok), format!("lex-max tree {} at i={i}; H_{i} (m=2) = {group}", top.name())))
    }

    fn kunneth(&self) -> Result<(Status, String)> {
        let mut details = Vec::new();
        let mut ok = true;
        for other in [corpus::k2(), corpus::triangle()] {
            let r = kunneth_rational_check(self.g, &other, self.m)?;
            ok &= r.holds();
            details.push(format!(
                "with {}: glued {:?} vs convolution {:?} of {:?} and {:?}",
                other.name().unwrap_or("?"),
                r.glued,
                r.predicted,
                r.left,
                r.right
            ));
        }
        Ok((verdict(ok), details.join("; ")))
    }
}

/// Structural properties, each returning a witness description on failure.
pub mod properties {
    use super::*;

    type Outcome = std::result::Result<(), String>;

    /// `f ∈ cut(T, e)` iff `e ∈ cyc(T, f)` for every spanning tree, tree edge `e` and non-tree edge `f`.
    pub fn cut_cycle_duality(g: &OrderedGraph) -> Outcome {
        for t in enumerate_spanning_trees(g) {
            for e in t.iter() {
                let cut = g.cut_set(t, e).map_err(|x| x.to_string())?;
                for f in g.all_edges().difference(t).iter() {
                    let cyc = g.cycle_set(t, f).map_err(|x| x.to_string())?;
                    if cut.contains(f) != cyc.contains(e) {
                        return Err(format!("T={t:?}, e={}, f={}", e + 1, f + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// The first NBC tree has no dead edges.
    pub fn lex_min_fully_active(trees: &NbcTrees) -> Outcome {
        let first = trees.get(0);
        if first.dead.is_empty() {
            Ok(())
        } else {
            Err(format!("lex-min tree {:?} has dead edges {:?}", first.edges, first.dead))
        }
    }

    /// For `e = min IN(T)`: `ψ'_e(T)` is NBC one grading lower and `ψ_e(ψ'_e(T)) = T`.
    pub fn exchange_round_trip(g: &OrderedGraph, trees: &NbcTrees) -> Outcome {
        for t in trees.iter() {
            let Some(e) = t.dead.min() else { continue };
            let down = psi_prime_e(g, t, e).map_err(|x| x.to_string())?;
            let Some(lower) = trees.find(down) else {
                return Err(format!("{}: psi' at edge {} gives non-NBC {down:?}", t.name(), e + 1));
            };
            if lower.hom_grading() + 1 != t.hom_grading() {
                return Err(format!("{}: psi' at edge {} lands at grading {}", t.name(), e + 1, lower.hom_grading()));
            }
            let back = psi_e(g, lower, e).map_err(|x| x.to_string())?;
            if back != t.edges {
                return Err(format!("{}: round trip at edge {} returns {back:?}", t.name(), e + 1));
            }
        }
        Ok(())
    }

    fn live_on_root_path(g: &OrderedGraph, t: &TreeRecord, v: usize) -> usize {
        g.unique_path(t.edges, g.root(), v).into_iter().filter(|&d| t.live.contains(d)).count()
    }

    /// When a fundamental cycle has an even number of live edges, both endpoints see the same parity.
    pub fn s_e_parity(g: &OrderedGraph, trees: &NbcTrees) -> Outcome {
        for t in trees.iter() {
            for e in t.external.iter() {
                let cyc = g.cycle_set(t.edges, e).map_err(|x| x.to_string())?;
                if cyc.intersection(t.live).len() % 2 == 1 {
                    continue;
                }
                let (u, v) = g.endpoints(e);
                if live_on_root_path(g, t, u) % 2 != live_on_root_path(g, t, v) % 2 {
                    return Err(format!("{} edge {}", t.name(), e + 1));
                }
            }
        }
        Ok(())
    }

    /// Each tree carries `m(m−1)^{c−1}` generators, `c` the number of components of `IN(T)`.
    pub fn generator_count(g: &OrderedGraph, trees: &NbcTrees, m: u32) -> Outcome {
        let gens = generators(g, trees, m).map_err(|x| x.to_string())?;
        for t in trees.iter() {
            let c = component_count(g, t) as u32;
            let expected = (m * (m - 1).pow(c - 1)) as usize;
            let actual = gens.iter().filter(|x| x.tree == t.lex_rank).count();
            if actual != expected {
                return Err(format!("{}: {actual} generators, expected {expected}", t.name()));
            }
        }
        Ok(())
    }

    /// At `m = 2` every generator has `i + j = n − 1` (root exponent 0) or `n` (root exponent 1).
    pub fn two_diagonals(g: &OrderedGraph, trees: &NbcTrees) -> Outcome {
        let n = g.vertex_count();
        for x in generators(g, trees, 2).map_err(|e| e.to_string())? {
            let i = trees.get(x.tree).hom_grading();
            let expected = n - 1 + x.exponents[0] as usize;
            if i + x.j() != expected {
                return Err(format!("{} at (i={i}, j={})", x.id(), x.j()));
            }
        }
        Ok(())
    }

    /// Every NBC set lies in exactly one interval `[IN(T), T]`, so `IN(T)` is the interval's bottom.
    pub fn interval_partition(g: &OrderedGraph, trees: &NbcTrees, limit: usize) -> Outcome {
        let p = shelling_partition(g, trees, limit).map_err(|e| e.to_string())?;
        if p.is_partition() {
            Ok(())
        } else {
            Err(format!("{} stray sets; {} multiply covered", p.stray.len(), p.cover.values().filter(|v| v.len() != 1).count()))
        }
    }
}
