use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::{GradedAlgebra, SparseVec};
use super::module::{image_blockwise, kernel_blockwise, GradedModule};
use crate::error::Error;
use crate::linalg::{Matrix, Q};

pub const DEFAULT_MAX_LEN: usize = 40;

/// `P_vertex⟨shift⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjSummand {
    pub vertex: usize,
    pub shift: i32,
}

/// Homological degree → summands `(vertex name, shift)`, sorted.
pub type BettiTable = BTreeMap<i32, Vec<(String, i32)>>;

/// Cochain complex of graded modules; `diffs[n]` maps term `n` to term `n+1`.
#[derive(Clone, Debug)]
pub struct Complex {
    alg: Arc<GradedAlgebra>,
    terms: BTreeMap<i32, GradedModule>,
    diffs: BTreeMap<i32, Matrix>,
}

impl Complex {
    pub fn new(
        alg: &Arc<GradedAlgebra>,
        terms: BTreeMap<i32, GradedModule>,
        diffs: BTreeMap<i32, Matrix>,
    ) -> Result<Self, Error> {
        if terms.values().any(|m| !Arc::ptr_eq(m.algebra(), alg)) {
            return Err(Error::AlgebraMismatch);
        }
        let c = Self { alg: alg.clone(), terms: terms.into_iter().filter(|(_, m)| !m.is_zero()).collect(), diffs };
        c.check()?;
        Ok(c)
    }

    pub fn from_module(m: &GradedModule) -> Self {
        let mut terms = BTreeMap::new();
        if !m.is_zero() {
            terms.insert(0, m.clone());
        }
        Self { alg: m.algebra().clone(), terms, diffs: BTreeMap::new() }
    }

    fn check(&self) -> Result<(), Error> {
        for (&n, d) in &self.diffs {
            let src = self.term(n);
            let dst = self.term(n + 1);
            if d.cols() != src.dim() || d.rows() != dst.dim() {
                return Err(Error::InvalidModule(format!("differential {n} has the wrong shape")));
            }
            if !src.is_zero() && !dst.is_zero() && !src.is_hom_to(&dst, d) {
                return Err(Error::InvalidModule(format!("differential {n} is not a module map")));
            }
        }
        for (&n, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(n + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(Error::InvalidModule(format!("d∘d ≠ 0 at {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn term(&self, n: i32) -> GradedModule {
        self.terms.get(&n).cloned().unwrap_or_else(|| GradedModule::zero(&self.alg))
    }

    pub fn terms(&self) -> &BTreeMap<i32, GradedModule> {
        &self.terms
    }

    /// `d^n: X^n → X^{n+1}`.
    pub fn diff(&self, n: i32) -> Matrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.term(n + 1).dim(), self.term(n).dim()))
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn homology(&self, n: i32) -> GradedModule {
        let x = self.term(n);
        if x.is_zero() {
            return x;
        }
        let ker = kernel_blockwise(&x, &self.diff(n));
        let prev = self.term(n - 1);
        let im = if prev.is_zero() { Vec::new() } else { image_blockwise(&prev, &self.diff(n - 1)) };
        x.subquotient(&ker, &im)
    }

    /// Degrees with nonzero homology.
    pub fn homology_support(&self) -> Vec<i32> {
        self.terms.keys().copied().filter(|&n| !self.homology(n).is_zero()).collect()
    }

    /// `Σ (-1)^n [X^n]` as `(vertex, degree) → multiplicity`.
    pub fn euler_characteristic(&self) -> BTreeMap<(usize, i32), i64> {
        let mut out = BTreeMap::new();
        for (&n, m) in &self.terms {
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            for (k, d) in m.graded_dims() {
                *out.entry(k).or_insert(0) += sign * d as i64;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Shifts every term by `⟨j⟩`.
    pub fn shift_grade(&self, j: i32) -> Complex {
        Complex {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(&n, m)| (n, m.shift(j))).collect(),
            diffs: self.diffs.clone(),
        }
    }
}

/// Bounded-above complex of finitely generated projectives, with
/// differentials given by matrices of algebra elements.
#[derive(Clone, Debug)]
pub struct ProjectiveComplex {
    alg: Arc<GradedAlgebra>,
    terms: BTreeMap<i32, Vec<ProjSummand>>,
    /// `diffs[n][a][b] ∈ e_{v_a} A e_{v_b}`: summand `a` of term `n` maps its
    /// generator to `Σ_b r_ab g_b` in term `n+1`.
    diffs: BTreeMap<i32, Vec<Vec<SparseVec>>>,
    truncated: Option<usize>,
}

/// Realizes `⊕ P_v⟨s⟩` as a module.
pub fn proj_sum_module(alg: &Arc<GradedAlgebra>, sum: &[ProjSummand]) -> GradedModule {
    let parts: Vec<GradedModule> = sum.iter().map(|p| GradedModule::projective(alg, p.vertex).shift(p.shift)).collect();
    let refs: Vec<&GradedModule> = parts.iter().collect();
    GradedModule::direct_sum(alg, &refs).expect("same algebra")
}

/// `⊕ I_v⟨s⟩`, the image of `⊕ P_v⟨s⟩` under the Nakayama functor.
pub fn inj_sum_module(alg: &Arc<GradedAlgebra>, sum: &[ProjSummand]) -> GradedModule {
    let parts: Vec<GradedModule> = sum.iter().map(|p| GradedModule::injective(alg, p.vertex).shift(p.shift)).collect();
    let refs: Vec<&GradedModule> = parts.iter().collect();
    GradedModule::direct_sum(alg, &refs).expect("same algebra")
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::new();
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    out.push(acc);
    out
}

/// Matrix of the map `⊕_a P_{v_a}⟨s_a⟩ → ⊕_b P_{v_b}⟨t_b⟩` given by `r`.
pub fn proj_map_matrix(
    alg: &GradedAlgebra,
    src: &[ProjSummand],
    dst: &[ProjSummand],
    r: &[Vec<SparseVec>],
) -> Matrix {
    let src_paths: Vec<Vec<usize>> = src.iter().map(|p| alg.paths_from(p.vertex)).collect();
    let dst_paths: Vec<Vec<usize>> = dst.iter().map(|p| alg.paths_from(p.vertex)).collect();
    let so = offsets(src_paths.iter().map(Vec::len));
    let do_ = offsets(dst_paths.iter().map(Vec::len));
    let dst_pos: Vec<BTreeMap<usize, usize>> =
        dst_paths.iter().map(|ps| ps.iter().enumerate().map(|(i, &b)| (b, i)).collect()).collect();
    let mut m = Matrix::zeros(do_[dst.len()], so[src.len()]);
    for (a, paths) in src_paths.iter().enumerate() {
        for (k, &p) in paths.iter().enumerate() {
            for (b, rab) in r[a].iter().enumerate() {
                for (x, cx) in rab {
                    for (c, cc) in alg.mult(p, *x) {
                        m.add_to(do_[b] + dst_pos[b][c], so[a] + k, &(cx * cc));
                    }
                }
            }
        }
    }
    m
}

/// Matrix of `ν(r): ⊕ I_{v_a}⟨s_a⟩ → ⊕ I_{v_b}⟨t_b⟩`, sending `b*` to
/// `Σ_c [b in r·c] c*`.
pub fn nakayama_map_matrix(
    alg: &GradedAlgebra,
    src: &[ProjSummand],
    dst: &[ProjSummand],
    r: &[Vec<SparseVec>],
) -> Matrix {
    let src_paths: Vec<Vec<usize>> = src.iter().map(|p| alg.paths_to(p.vertex)).collect();
    let dst_paths: Vec<Vec<usize>> = dst.iter().map(|p| alg.paths_to(p.vertex)).collect();
    let so = offsets(src_paths.iter().map(Vec::len));
    let do_ = offsets(dst_paths.iter().map(Vec::len));
    let src_pos: Vec<BTreeMap<usize, usize>> =
        src_paths.iter().map(|ps| ps.iter().enumerate().map(|(i, &b)| (b, i)).collect()).collect();
    let mut m = Matrix::zeros(do_[dst.len()], so[src.len()]);
    for a in 0..src.len() {
        for (b, rab) in r[a].iter().enumerate() {
            for (k, &c) in dst_paths[b].iter().enumerate() {
                for (x, cx) in rab {
                    for (y, cy) in alg.mult(*x, c) {
                        if let Some(&pos) = src_pos[a].get(y) {
                            m.add_to(do_[b] + k, so[a] + pos, &(cx * cy));
                        }
                    }
                }
            }
        }
    }
    m
}

impl ProjectiveComplex {
    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<i32, Vec<ProjSummand>> {
        &self.terms
    }

    pub fn term(&self, n: i32) -> &[ProjSummand] {
        self.terms.get(&n).map_or(&[], Vec::as_slice)
    }

    /// `d^n` as a matrix of algebra elements (rows: summands of term `n`).
    pub fn diff_entries(&self, n: i32) -> Vec<Vec<SparseVec>> {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| vec![vec![Vec::new(); self.term(n + 1).len()]; self.term(n).len()])
    }

    /// `Some(max_len)` when the construction stopped before terminating.
    pub fn truncated(&self) -> Option<usize> {
        self.truncated
    }

    pub fn require_complete(&self) -> Result<&Self, Error> {
        match self.truncated {
            Some(max_len) => Err(Error::Truncated { max_len }),
            None => Ok(self),
        }
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Length of a resolution of a module: the largest homological degree.
    pub fn length(&self) -> usize {
        self.lowest_degree().map_or(0, |n| (-n).max(0) as usize)
    }

    /// Homological degree (`-n`) → summands by vertex name, sorted.
    pub fn betti_table(&self) -> BettiTable {
        self.terms
            .iter()
            .map(|(&n, s)| {
                let mut row: Vec<(String, i32)> =
                    s.iter().map(|p| (self.alg.vertices()[p.vertex].clone(), p.shift)).collect();
                row.sort();
                (-n, row)
            })
            .collect()
    }

    pub fn to_complex(&self) -> Complex {
        let terms = self.terms.iter().map(|(&n, s)| (n, proj_sum_module(&self.alg, s))).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, r)| (n, proj_map_matrix(&self.alg, self.term(n), self.term(n + 1), r)))
            .collect();
        Complex { alg: self.alg.clone(), terms, diffs }
    }

    /// Derived Nakayama functor: `P_v⟨s⟩ ↦ I_v⟨s⟩`.
    pub fn nakayama(&self) -> Complex {
        let terms = self.terms.iter().map(|(&n, s)| (n, inj_sum_module(&self.alg, s))).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, r)| (n, nakayama_map_matrix(&self.alg, self.term(n), self.term(n + 1), r)))
            .collect();
        Complex { alg: self.alg.clone(), terms, diffs }
    }

    /// Whether every differential entry lies in the radical.
    pub fn is_minimal(&self) -> bool {
        self.diffs.values().flatten().flatten().flatten().all(|(x, c)| c.is_zero() || self.alg.basis()[*x].degree > 0)
    }

    /// Cancels pairs of summands joined by an isomorphism.
    fn minimize(&mut self) {
        loop {
            let mut found = None;
            'search: for (&n, r) in &self.diffs {
                for (a, row) in r.iter().enumerate() {
                    for (b, rab) in row.iter().enumerate() {
                        if let Some((_, c)) = rab.iter().find(|(x, c)| !c.is_zero() && self.alg.basis()[*x].degree == 0) {
                            found = Some((n, a, b, c.clone()));
                            break 'search;
                        }
                    }
                }
            }
            let Some((n, a, b, c)) = found else { return };
            let r = self.diffs[&n].clone();
            let cinv = c.recip();
            let mut new = r.clone();
            for a2 in 0..r.len() {
                for b2 in 0..r[a2].len() {
                    if a2 == a || b2 == b || r[a2][b].is_empty() || r[a][b2].is_empty() {
                        continue;
                    }
                    let x = self.alg.multiply(&self.alg.dense(&r[a2][b]), &self.alg.dense(&r[a][b2]));
                    let mut acc = self.alg.dense(&r[a2][b2]);
                    for (t, xv) in acc.iter_mut().zip(&x) {
                        *t -= xv * &cinv;
                    }
                    new[a2][b2] = acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                }
            }
            for row in new.iter_mut() {
                row.remove(b);
            }
            new.remove(a);
            self.diffs.insert(n, new);
            if let Some(prev) = self.diffs.get_mut(&(n - 1)) {
                for row in prev.iter_mut() {
                    row.remove(a);
                }
            }
            if let Some(next) = self.diffs.get_mut(&(n + 1)) {
                next.remove(b);
            }
            self.terms.get_mut(&n).unwrap().remove(a);
            self.terms.get_mut(&(n + 1)).unwrap().remove(b);
            self.terms.retain(|_, s| !s.is_empty());
            let terms = &self.terms;
            self.diffs.retain(|k, _| terms.contains_key(k) && terms.contains_key(&(k + 1)));
        }
    }
}

/// Projective cover `⊕ P_v⟨-d⟩ → M`, returned as summands, the realized
/// projective and the cover map.
pub fn projective_cover(m: &GradedModule) -> Result<(Vec<ProjSummand>, GradedModule, Matrix), Error> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    let alg = m.algebra();
    let tops = m.top_representatives(&m.all_vectors());
    let sum: Vec<ProjSummand> = tops
        .iter()
        .map(|u| {
            let (d, v) = m.block_of(u).unwrap();
            ProjSummand { vertex: v, shift: -d }
        })
        .collect();
    let p = proj_sum_module(alg, &sum);
    let mut cols = Vec::new();
    for (u, s) in tops.iter().zip(&sum) {
        for b in alg.paths_from(s.vertex) {
            cols.push(m.action(b).mul_vec(u));
        }
    }
    let cover = Matrix::from_columns(m.dim(), &cols);
    Ok((sum, p, cover))
}

/// Minimal projective resolution of a module, computed to homological
/// degree `max_len`.
pub fn minimal_resolution(m: &GradedModule, max_len: usize) -> ProjectiveComplex {
    resolve(&Complex::from_module(m), max_len)
}

/// Minimal projective complex quasi-isomorphic to `x`. Terms are built from
/// the top degree down, each as a projective cover of the cocycles of the
/// mapping cone; cancellable pairs are removed afterwards.
pub fn resolve(x: &Complex, max_len: usize) -> ProjectiveComplex {
    let alg = x.algebra().clone();
    let mut out = ProjectiveComplex { alg: alg.clone(), terms: BTreeMap::new(), diffs: BTreeMap::new(), truncated: None };
    let Some((lo, hi)) = x.degree_range() else { return out };
    let stop = lo - max_len as i32;
    // data for degree n+1 and n+2
    let mut p1: Vec<ProjSummand> = Vec::new();
    let mut p1_mod = GradedModule::zero(&alg);
    let mut f1 = Matrix::zeros(0, 0);
    let mut p2_mod = GradedModule::zero(&alg);
    let mut d1 = Matrix::zeros(0, 0);
    let mut n = hi;
    loop {
        let xn = x.term(n);
        let xn1 = x.term(n + 1);
        let ambient = GradedModule::direct_sum(&alg, &[&p1_mod, &xn]).expect("same algebra");
        if ambient.is_zero() {
            if n < lo {
                break;
            }
            p2_mod = p1_mod;
            p1 = Vec::new();
            p1_mod = GradedModule::zero(&alg);
            f1 = Matrix::zeros(xn.dim(), 0);
            d1 = Matrix::zeros(0, 0);
            n -= 1;
            continue;
        }
        let (np1, nx) = (p1_mod.dim(), xn.dim());
        let (np2, nx1) = (p2_mod.dim(), xn1.dim());
        let mut big = Matrix::zeros(np2 + nx1, np1 + nx);
        for i in 0..np2 {
            for j in 0..np1 {
                big.set(i, j, d1.get(i, j).clone());
            }
        }
        let dx = x.diff(n);
        for i in 0..nx1 {
            for j in 0..np1 {
                big.set(np2 + i, j, f1.get(i, j).clone());
            }
            for j in 0..nx {
                big.set(np2 + i, np1 + j, -dx.get(i, j).clone());
            }
        }
        let z = kernel_blockwise(&ambient, &big);
        if z.is_empty() && n < lo {
            break;
        }
        if n < stop {
            out.truncated = Some(max_len);
            break;
        }
        let tops = ambient.top_representatives(&z);
        let sum: Vec<ProjSummand> = tops
            .iter()
            .map(|u| {
                let (d, v) = ambient.block_of(u).unwrap();
                ProjSummand { vertex: v, shift: -d }
            })
            .collect();
        // differential entries from the P-components
        let p1_paths: Vec<Vec<usize>> = p1.iter().map(|p| alg.paths_from(p.vertex)).collect();
        let p1_off = offsets(p1_paths.iter().map(Vec::len));
        let r: Vec<Vec<SparseVec>> = tops
            .iter()
            .map(|u| {
                (0..p1.len())
                    .map(|b| {
                        p1_paths[b]
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| !u[p1_off[b] + k].is_zero())
                            .map(|(k, &path)| (path, u[p1_off[b] + k].clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut fcols: Vec<Vec<Q>> = Vec::new();
        for (u, s) in tops.iter().zip(&sum) {
            let xpart = &u[np1..];
            for b in alg.paths_from(s.vertex) {
                fcols.push(xn.action(b).mul_vec(xpart));
            }
        }
        let new_mod = proj_sum_module(&alg, &sum);
        let new_f = Matrix::from_columns(nx, &fcols);
        let new_d = proj_map_matrix(&alg, &sum, &p1, &r);
        if !sum.is_empty() {
            out.terms.insert(n, sum.clone());
            if !p1.is_empty() {
                out.diffs.insert(n, r);
            }
        }
        p2_mod = p1_mod;
        p1 = sum;
        p1_mod = new_mod;
        f1 = new_f;
        d1 = new_d;
        n -= 1;
    }
    out.minimize();
    out
}

/// Degrees of a graded module in which vertex `v` occurs.
pub fn degrees_at(m: &GradedModule, v: usize) -> BTreeSet<i32> {
    m.basis().iter().filter(|b| b.1 == v).map(|b| b.0).collect()
}
