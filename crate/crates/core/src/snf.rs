//! Smith normal form over the integers.
//!
//! Sparse matrices are first reduced by eliminating unit pivots in `i64`; what
//! remains (or everything, if an entry would overflow) is finished densely
//! with arbitrary-precision integers.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complex::SparseMatrix;

/// Nonzero invariant factors `d1 | d2 | …` of a dense integer matrix.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    dense_factors(m.to_vec())
}

/// Convenience wrapper for `i64` input.
pub fn smith_normal_form_i64(m: &[Vec<i64>]) -> Vec<BigInt> {
    dense_factors(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

fn dense_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let Some((pr, pc)) = smallest(&a, t..rows, t..cols) else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = a[t][t].clone();
            for r in t + 1..rows {
                if !a[r][t].is_zero() {
                    let q = &a[r][t] / &p;
                    for c in t..cols {
                        let sub = &q * &a[t][c];
                        a[r][c] -= sub;
                    }
                }
            }
            for c in t + 1..cols {
                if !a[t][c].is_zero() {
                    let q = &a[t][c] / &p;
                    for row in a.iter_mut().skip(t) {
                        let sub = &q * &row[t];
                        row[c] -= sub;
                    }
                }
            }
            let leftover_col = (t + 1..rows).any(|r| !a[r][t].is_zero());
            let leftover_row = (t + 1..cols).any(|c| !a[t][c].is_zero());
            if leftover_col || leftover_row {
                // A remainder is smaller than the pivot; move it into place and repeat.
                let (r, c) = if leftover_col {
                    let r = (t + 1..rows)
                        .filter(|&r| !a[r][t].is_zero())
                        .min_by_key(|&r| a[r][t].abs())
                        .unwrap();
                    (r, t)
                } else {
                    let c = (t + 1..cols)
                        .filter(|&c| !a[t][c].is_zero())
                        .min_by_key(|&c| a[t][c].abs())
                        .unwrap();
                    (t, c)
                };
                a.swap(t, r);
                for row in a.iter_mut() {
                    row.swap(t, c);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !(&a[r][c] % &p).is_zero()));
            match bad {
                Some(r) => {
                    for c in t..cols {
                        let add = a[r][c].clone();
                        a[t][c] += add;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    normalize(diag)
}

fn smallest(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in rows {
        for c in cols.clone() {
            let x = &a[r][c];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| x.abs() < a[br][bc].abs()) {
                best = Some((r, c));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Sorts and enforces the divisibility chain with gcd/lcm swaps.
fn normalize(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.retain(|x| !x.is_zero());
    d.sort();
    let first = d.iter().take_while(|x| x.is_one()).count();
    for i in first..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Nonzero invariant factors of a sparse matrix. The count is its rank.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut rows: Vec<HashMap<usize, i64>> = vec![HashMap::new(); m.rows()];
    let mut cols: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols()];
    for (r, c, v) in m.triplets() {
        rows[r].insert(c, v);
        cols[c].insert(r);
    }
    let mut candidates: BTreeSet<(usize, usize)> =
        rows.iter().enumerate().filter(|(_, row)| !row.is_empty()).map(|(r, row)| (row.len(), r)).collect();
    let mut units = 0usize;

    'pivots: while let Some((_, r)) = candidates.pop_first() {
        let Some(c) = rows[r]
            .iter()
            .filter(|(_, v)| v.abs() == 1)
            .map(|(&c, _)| c)
            .min_by_key(|&c| (cols[c].len(), c))
        else {
            continue;
        };
        let u = rows[r][&c];
        let mut others: Vec<usize> = cols[c].iter().copied().filter(|&x| x != r).collect();
        others.sort_unstable();
        for r2 in others {
            let factor = rows[r2][&c] * u;
            let mut updated = rows[r2].clone();
            for (&c2, &v) in &rows[r] {
                let cur = updated.get(&c2).copied().unwrap_or(0);
                let Some(next) = v.checked_mul(factor).and_then(|p| cur.checked_sub(p)) else {
                    candidates.insert((rows[r].len(), r));
                    break 'pivots;
                };
                if next == 0 {
                    updated.remove(&c2);
                } else {
                    updated.insert(c2, next);
                }
            }
            candidates.remove(&(rows[r2].len(), r2));
            for &c2 in rows[r].keys() {
                if updated.contains_key(&c2) {
                    cols[c2].insert(r2);
                } else {
                    cols[c2].remove(&r2);
                }
            }
            rows[r2] = updated;
            if !rows[r2].is_empty() {
                candidates.insert((rows[r2].len(), r2));
            }
        }
        // Column c is now zero outside row r, so the rest of row r clears by column operations.
        for &c2 in rows[r].keys() {
            cols[c2].remove(&r);
        }
        rows[r].clear();
        units += 1;
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    live_cols.sort_unstable();
    let col_pos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let dense: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (&c, &v) in &rows[r] {
                row[col_pos[&c]] = BigInt::from(v);
            }
            row
        })
        .collect();
    let mut out = vec![BigInt::one(); units];
    out.extend(dense_factors(dense));
    out
}

/// Rank of a sparse integer matrix.
pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}
