//! Slow reference implementations used to cross-check the fast engines.
//!
//! Nothing here shares code with [`crate::hecke`], [`crate::cells`] or
//! [`crate::typea`] beyond the group tables themselves.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::cells::{CellKind, CellPartition};
use crate::coxeter::CoxeterGroup;
use crate::hecke::KLTable;
use crate::laurent::LaurentPoly;

type Dense = Vec<LaurentPoly>;

/// `x · (H_s + c·1)` on a dense standard-basis vector.
fn times_generator(g: &CoxeterGroup, x: &Dense, s: usize, shift: &LaurentPoly) -> Dense {
    let mut out = vec![LaurentPoly::zero(); x.len()];
    let down = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
    for (w, p) in x.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let ws = g.right_mul(w, s);
        out[ws] += p;
        if g.length_of(ws) < g.length_of(w) {
            out[w] += &(p * &down);
        }
        out[w] += &(p * shift);
    }
    out
}

/// KL polynomials by solving the bar-invariance condition directly.
///
/// Builds the R-polynomials `bar(H_y) = Σ r_{x,y} H_x` and then, for each
/// `y`, solves `h_{z,y} - bar(h_{z,y}) = Σ_{z<x≤y} r_{z,x} bar(h_{x,y})` for
/// `h_{z,y} ∈ vZ[v]`, going down in length. Returns `h[x][y]`.
pub fn kl_by_bar_solve(g: &CoxeterGroup) -> Vec<Vec<LaurentPoly>> {
    let n = g.len();
    let bar_shift = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    // r[y] = coefficients of bar(H_y)
    let mut r: Vec<Dense> = Vec::with_capacity(n);
    let mut e = vec![LaurentPoly::zero(); n];
    e[0] = LaurentPoly::one();
    r.push(e);
    for y in 1..n {
        let s = (0..g.rank()).find(|&s| g.right_descents_of(y) >> s & 1 == 1).unwrap();
        let yp = g.right_mul(y, s);
        r.push(times_generator(g, &r[yp], s, &bar_shift));
    }
    let mut h = vec![vec![LaurentPoly::zero(); n]; n];
    let mut by_length: Vec<usize> = (0..n).collect();
    by_length.sort_by_key(|&w| std::cmp::Reverse(g.length_of(w)));
    for y in 0..n {
        h[y][y] = LaurentPoly::one();
        for &z in &by_length {
            if g.length_of(z) >= g.length_of(y) {
                continue;
            }
            let mut q = LaurentPoly::zero();
            for x in 0..n {
                if x == z || h[x][y].is_zero() || r[x][z].is_zero() {
                    continue;
                }
                q += &(&r[x][z] * &h[x][y].bar());
            }
            h[z][y] = LaurentPoly::from_terms(q.terms().filter(|(k, _)| *k > 0).map(|(k, c)| (k, c.clone())));
        }
    }
    h
}

/// Cells straight from the definition: `x ≤_L y` when `H̲_y` occurs in some
/// `H̲_w H̲_x` (and `H̲_x H̲_w` for the right order), closed transitively.
pub fn cells_by_definition(kl: &KLTable, kind: CellKind) -> CellPartition {
    let g = kl.group();
    let n = g.len();
    let mut reach = vec![vec![false; n]; n];
    for x in g.enumerate() {
        reach[x.index()][x.index()] = true;
        for w in g.enumerate() {
            let mut products = Vec::new();
            if kind != CellKind::Right {
                products.push(kl.mult_kl(w, x).unwrap());
            }
            if kind != CellKind::Left {
                products.push(kl.mult_kl(x, w).unwrap());
            }
            for prod in products {
                for y in prod.keys() {
                    reach[x.index()][y.index()] = true;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut labels = vec![usize::MAX; n];
    for i in 0..n {
        if labels[i] == usize::MAX {
            for j in i..n {
                if reach[i][j] && reach[j][i] {
                    labels[j] = i;
                }
            }
        }
    }
    CellPartition::from_labels(g, kind, &labels)
}

/// The a-function by maximising over every pair `x, y` in the group.
pub fn a_values_by_definition(kl: &KLTable) -> Vec<u32> {
    let g = kl.group();
    let mut best = vec![0i32; g.len()];
    for x in g.enumerate() {
        for y in g.enumerate() {
            for (w, p) in kl.mult_kl(x, y).unwrap() {
                let d = p.degree().unwrap();
                best[w.index()] = best[w.index()].max(d);
            }
        }
    }
    best.into_iter().map(|d| d as u32).collect()
}

/// The RS insertion tableau obtained by column-inserting the letters of
/// `perm` from right to left.
pub fn rs_p_by_column_insertion(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut cols: Vec<Vec<usize>> = Vec::new();
    for &x in perm.iter().rev() {
        let mut bump = x;
        let mut c = 0;
        loop {
            if c == cols.len() {
                cols.push(vec![bump]);
                break;
            }
            match cols[c].iter().position(|&y| y > bump) {
                Some(k) => {
                    bump = std::mem::replace(&mut cols[c][k], bump);
                    c += 1;
                }
                None => {
                    cols[c].push(bump);
                    break;
                }
            }
        }
    }
    let height = cols.first().map_or(0, Vec::len);
    (0..height)
        .map(|r| cols.iter().filter_map(|col| col.get(r).copied()).collect())
        .collect()
}

/// Lusztig's `a` in type A computed by counting: `a(w)` for `w` with RS
/// shape `λ` equals the length of the longest element of the Young subgroup
/// `S_{λ'}`, i.e. `Σ_j C(λ'_j, 2)`.
pub fn type_a_a_by_young_subgroup(shape: &[usize]) -> usize {
    let cols = shape.first().copied().unwrap_or(0);
    (0..cols)
        .map(|j| {
            let h = shape.iter().filter(|&&p| p > j).count();
            h * (h.saturating_sub(1)) / 2
        })
        .sum()
}

/// Coefficient sanity: every entry of `kl_by_bar_solve` for `x ≠ y` sits in
/// `vZ[v]` with nonnegative coefficients.
pub fn is_positive_triangular(h: &[Vec<LaurentPoly>]) -> bool {
    h.iter().enumerate().all(|(x, row)| {
        row.iter().enumerate().all(|(y, p)| {
            if x == y {
                p.is_one()
            } else {
                p.terms().all(|(k, c)| k > 0 && !c.is_negative())
            }
        })
    })
}

/// Multiset of `h_{x,y}(1)` values, handy as a coarse fingerprint.
pub fn evaluation_histogram(h: &[Vec<LaurentPoly>]) -> HashMap<BigInt, usize> {
    let mut out = HashMap::new();
    for row in h {
        for p in row {
            if !p.is_zero() {
                *out.entry(p.eval_at_one()).or_insert(0) += 1;
            }
        }
    }
    out.remove(&BigInt::one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::Cells;
    use crate::typea;
    use std::sync::Arc;

    #[test]
    fn bar_solve_agrees_with_recursion_on_s4() {
        let g = Arc::new(CoxeterGroup::symmetric(4).unwrap());
        let kl = KLTable::new(g.clone());
        let h = kl_by_bar_solve(&g);
        assert!(is_positive_triangular(&h));
        for x in g.enumerate() {
            for y in g.enumerate() {
                assert_eq!(kl.kl_poly(x, y).unwrap(), h[x.index()][y.index()]);
            }
        }
        let hist = evaluation_histogram(&h);
        assert_eq!(hist.keys().collect::<Vec<_>>(), vec![&BigInt::from(2)]);
    }

    #[test]
    fn bar_solve_agrees_on_b3() {
        let g = Arc::new(CoxeterGroup::new(crate::coxeter::CoxeterSystem::parse_type("B3").unwrap()).unwrap());
        let kl = KLTable::new(g.clone());
        let h = kl_by_bar_solve(&g);
        for x in g.enumerate() {
            for y in g.enumerate() {
                assert_eq!(kl.kl_poly(x, y).unwrap(), h[x.index()][y.index()]);
            }
        }
    }

    #[test]
    fn definition_cells_match_mu_graph_cells() {
        for n in [3, 4] {
            let g = Arc::new(CoxeterGroup::symmetric(n).unwrap());
            let kl = KLTable::new(g.clone());
            let cells = Cells::new(&kl);
            for kind in [CellKind::Left, CellKind::Right, CellKind::TwoSided] {
                let slow = cells_by_definition(&kl, kind);
                assert!(slow.same_partition(cells.partition(kind)), "S{n} {kind:?}");
            }
        }
    }

    #[test]
    fn a_by_definition_matches_cell_restricted_a() {
        let g = Arc::new(CoxeterGroup::symmetric(4).unwrap());
        let kl = KLTable::new(g.clone());
        let cells = Cells::new(&kl);
        let slow = a_values_by_definition(&kl);
        for w in g.enumerate() {
            assert_eq!(cells.a_function(w).unwrap(), slow[w.index()]);
        }
    }

    #[test]
    fn column_insertion_matches_row_insertion() {
        for n in 1..=6 {
            let g = CoxeterGroup::symmetric(n).unwrap();
            for w in g.enumerate() {
                let perm = typea::one_line(&g, w).unwrap();
                let (p, _) = typea::rs(&perm).unwrap();
                assert_eq!(rs_p_by_column_insertion(&perm), p.rows());
            }
        }
    }

    #[test]
    fn young_subgroup_count_matches_partition_formula() {
        for n in 1..=8 {
            for lambda in typea::Partition::all(n) {
                assert_eq!(type_a_a_by_young_subgroup(lambda.parts()), typea::shape_a(&lambda));
            }
        }
    }
}
