use std::collections::{BTreeMap, BTreeSet};

use super::complex::{minimal_resolution, ProjectiveComplex};
use super::module::GradedModule;
use crate::error::Error;
use crate::linalg::Matrix;

/// `(m, j) → dim ext^m(X, N⟨j⟩)`, nonzero entries only.
pub type ExtTable = BTreeMap<(i32, i32), usize>;

/// Indices of `N`'s basis in block `(degree, vertex)`.
fn block(n: &GradedModule, degree: i32, vertex: usize) -> Vec<usize> {
    n.basis().iter().enumerate().filter(|(_, b)| **b == (degree, vertex)).map(|(i, _)| i).collect()
}

/// Coordinates of `Hom(P^{k}, N⟨j⟩)`: per summand, the matching block of `N`.
fn hom_blocks(p: &ProjectiveComplex, k: i32, n: &GradedModule, j: i32) -> Vec<Vec<usize>> {
    p.term(k).iter().map(|s| block(n, j - s.shift, s.vertex)).collect()
}

/// Matrix of `Hom(P^{k+1}, N⟨j⟩) → Hom(P^k, N⟨j⟩)`, precomposition with `d^k`.
fn hom_diff(p: &ProjectiveComplex, k: i32, n: &GradedModule, j: i32) -> Matrix {
    let src = hom_blocks(p, k + 1, n, j);
    let dst = hom_blocks(p, k, n, j);
    let so: Vec<usize> = src.iter().scan(0, |acc, b| { let o = *acc; *acc += b.len(); Some(o) }).collect();
    let dof: Vec<usize> = dst.iter().scan(0, |acc, b| { let o = *acc; *acc += b.len(); Some(o) }).collect();
    let rows = dst.iter().map(Vec::len).sum();
    let cols = src.iter().map(Vec::len).sum();
    let mut m = Matrix::zeros(rows, cols);
    if rows == 0 || cols == 0 {
        return m;
    }
    let r = p.diff_entries(k);
    for (a, row) in r.iter().enumerate() {
        for (b, rab) in row.iter().enumerate() {
            for (x, c) in rab {
                let act = n.action(*x);
                for (ii, &i) in dst[a].iter().enumerate() {
                    for (jj, &jdx) in src[b].iter().enumerate() {
                        let v = act.get(i, jdx);
                        if !num_traits::Zero::is_zero(v) {
                            m.add_to(dof[a] + ii, so[b] + jj, &(c * v));
                        }
                    }
                }
            }
        }
    }
    m
}

/// `dim ext^m(X, N⟨j⟩)` for every `j` and every `m` in `ms`, where `X` is
/// given by a projective complex.
pub fn ext_from_complex(p: &ProjectiveComplex, n: &GradedModule, ms: &[i32]) -> Result<ExtTable, Error> {
    if !std::sync::Arc::ptr_eq(p.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let mut out = ExtTable::new();
    for &m in ms {
        if let Some(max_len) = p.truncated() {
            let lowest = p.lowest_degree().unwrap_or(0);
            if -m - 1 < lowest {
                return Err(Error::Truncated { max_len });
            }
        }
        let k = -m;
        let mut js = BTreeSet::new();
        for s in p.term(k) {
            for &(d, v) in n.basis() {
                if v == s.vertex {
                    js.insert(d + s.shift);
                }
            }
        }
        for j in js {
            let dim: usize = hom_blocks(p, k, n, j).iter().map(Vec::len).sum();
            if dim == 0 {
                continue;
            }
            let out_rank = hom_diff(p, k - 1, n, j).rank();
            let in_rank = hom_diff(p, k, n, j).rank();
            let e = dim - out_rank - in_rank;
            if e > 0 {
                out.insert((m, j), e);
            }
        }
    }
    Ok(out)
}

/// `dim ext^m(M, N⟨j⟩)` for `0 ≤ m ≤ max_deg`.
pub fn ext_table(m: &GradedModule, n: &GradedModule, max_deg: usize) -> Result<ExtTable, Error> {
    let p = minimal_resolution(m, max_deg + 1);
    let ms: Vec<i32> = (0..=max_deg as i32).collect();
    ext_from_complex(&p, n, &ms)
}

/// Restriction of a table to one homological degree: `j → dim`.
pub fn ext_row(t: &ExtTable, m: i32) -> BTreeMap<i32, usize> {
    t.iter().filter(|((k, _), _)| *k == m).map(|((_, j), d)| (*j, *d)).collect()
}
