use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::algebra::GradedAlgebra;
use crate::error::Error;
use crate::linalg::{Matrix, Span, Q};

/// A finite-dimensional graded module. Every basis vector sits in a single
/// `(degree, vertex)` block and `action[a]` is the matrix of basis element
/// `a` of the algebra.
#[derive(Clone)]
pub struct GradedModule {
    alg: Arc<GradedAlgebra>,
    basis: Vec<(i32, usize)>,
    action: Vec<Matrix>,
}

impl std::fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedModule")
            .field("algebra", &self.alg.name())
            .field("dims", &self.graded_dims())
            .finish()
    }
}

/// Serializable dump of a module: graded dimensions and action matrices of
/// the algebra generators.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleDump {
    pub algebra: String,
    pub basis: Vec<(String, i32)>,
    pub graded_dims: Vec<(String, i32, usize)>,
    pub actions: BTreeMap<String, Matrix>,
}

impl GradedModule {
    pub fn new(alg: Arc<GradedAlgebra>, basis: Vec<(i32, usize)>, action: Vec<Matrix>) -> Result<Self, Error> {
        let m = Self { alg, basis, action };
        m.check_axioms()?;
        Ok(m)
    }

    fn raw(alg: Arc<GradedAlgebra>, basis: Vec<(i32, usize)>, action: Vec<Matrix>) -> Self {
        Self { alg, basis, action }
    }

    pub fn zero(alg: &Arc<GradedAlgebra>) -> Self {
        let n = alg.dim();
        Self::raw(alg.clone(), Vec::new(), vec![Matrix::zeros(0, 0); n])
    }

    /// `A e_v`, spanned by the basis elements with source `v`.
    pub fn projective(alg: &Arc<GradedAlgebra>, v: usize) -> Self {
        let paths = alg.paths_from(v);
        let pos: BTreeMap<usize, usize> = paths.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let basis = paths.iter().map(|&b| (alg.basis()[b].degree, alg.basis()[b].target)).collect();
        let action = (0..alg.dim())
            .map(|a| {
                let mut m = Matrix::zeros(paths.len(), paths.len());
                for (j, &b) in paths.iter().enumerate() {
                    for (c, x) in alg.mult(a, b) {
                        m.set(pos[c], j, x.clone());
                    }
                }
                m
            })
            .collect();
        Self::raw(alg.clone(), basis, action)
    }

    pub fn simple(alg: &Arc<GradedAlgebra>, v: usize) -> Self {
        let action = (0..alg.dim())
            .map(|a| if a == v { Matrix::identity(1) } else { Matrix::zeros(1, 1) })
            .collect();
        Self::raw(alg.clone(), vec![(0, v)], action)
    }

    /// The graded dual of the projective of the opposite algebra.
    pub fn injective(alg: &Arc<GradedAlgebra>, v: usize) -> Self {
        Self::projective(&alg.opposite(), v).dual()
    }

    /// `Hom_k(M, k)` with degrees negated; a module over the opposite algebra.
    pub fn dual(&self) -> Self {
        Self::raw(
            self.alg.opposite(),
            self.basis.iter().map(|&(d, v)| (-d, v)).collect(),
            self.action.iter().map(Matrix::transpose).collect(),
        )
    }

    /// `M⟨j⟩`: an element of degree `m` moves to degree `m - j`.
    pub fn shift(&self, j: i32) -> Self {
        Self::raw(self.alg.clone(), self.basis.iter().map(|&(d, v)| (d - j, v)).collect(), self.action.clone())
    }

    pub fn direct_sum(alg: &Arc<GradedAlgebra>, parts: &[&GradedModule]) -> Result<Self, Error> {
        if parts.iter().any(|p| !Arc::ptr_eq(&p.alg, alg)) {
            return Err(Error::AlgebraMismatch);
        }
        let basis: Vec<(i32, usize)> = parts.iter().flat_map(|p| p.basis.iter().copied()).collect();
        let n = basis.len();
        let action = (0..alg.dim())
            .map(|a| {
                let mut m = Matrix::zeros(n, n);
                let mut off = 0;
                for p in parts {
                    let pa = &p.action[a];
                    for i in 0..p.dim() {
                        for j in 0..p.dim() {
                            let x = pa.get(i, j);
                            if !x.is_zero() {
                                m.set(off + i, off + j, x.clone());
                            }
                        }
                    }
                    off += p.dim();
                }
                m
            })
            .collect();
        Ok(Self::raw(alg.clone(), basis, action))
    }

    pub fn check_axioms(&self) -> Result<(), Error> {
        let n = self.dim();
        let alg = &self.alg;
        if self.action.len() != alg.dim() || self.action.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::InvalidModule("action matrices have the wrong shape".into()));
        }
        if self.basis.iter().any(|&(_, v)| v >= alg.num_vertices()) {
            return Err(Error::InvalidModule("basis vector at an unknown vertex".into()));
        }
        for (a, m) in self.action.iter().enumerate() {
            let ba = &alg.basis()[a];
            for j in 0..n {
                for i in 0..n {
                    let x = m.get(i, j);
                    let expected = a < alg.num_vertices() && i == j && self.basis[j].1 == a;
                    if a < alg.num_vertices() {
                        if (expected && !x.is_one()) || (!expected && !x.is_zero()) {
                            return Err(Error::InvalidModule("idempotents must act as projections".into()));
                        }
                        continue;
                    }
                    if x.is_zero() {
                        continue;
                    }
                    let (dj, vj) = self.basis[j];
                    let (di, vi) = self.basis[i];
                    if vj != ba.source || vi != ba.target || di != dj + ba.degree {
                        return Err(Error::InvalidModule(format!("action of {} is not homogeneous", ba.label)));
                    }
                }
            }
        }
        for a in alg.num_vertices()..alg.dim() {
            for b in alg.num_vertices()..alg.dim() {
                let lhs = self.action[a].mul(&self.action[b]);
                let mut rhs = Matrix::zeros(n, n);
                for (c, x) in alg.mult(a, b) {
                    rhs = rhs.add(&self.action[*c].scale(x));
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "action is not associative on ({}, {})",
                        alg.basis()[a].label,
                        alg.basis()[b].label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn basis(&self) -> &[(i32, usize)] {
        &self.basis
    }

    pub fn action(&self, a: usize) -> &Matrix {
        &self.action[a]
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn same_algebra(&self, other: &GradedModule) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg)
    }

    /// `(vertex, degree) → dimension`.
    pub fn graded_dims(&self) -> BTreeMap<(usize, i32), usize> {
        let mut out = BTreeMap::new();
        for &(d, v) in &self.basis {
            *out.entry((v, d)).or_insert(0) += 1;
        }
        out
    }

    /// Graded dimensions keyed by vertex name.
    pub fn named_dims(&self) -> BTreeMap<(String, i32), usize> {
        self.graded_dims()
            .into_iter()
            .map(|((v, d), n)| ((self.alg.vertices()[v].clone(), d), n))
            .collect()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.basis.iter().map(|b| b.0).min()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.basis.iter().map(|b| b.0).max()
    }

    /// Total multiplicity of each simple, forgetting the grading.
    pub fn composition_multiplicities(&self) -> Vec<usize> {
        let mut out = vec![0; self.alg.num_vertices()];
        for &(_, v) in &self.basis {
            out[v] += 1;
        }
        out
    }

    pub fn blocks(&self) -> BTreeMap<(i32, usize), Vec<usize>> {
        let mut out: BTreeMap<(i32, usize), Vec<usize>> = BTreeMap::new();
        for (i, &b) in self.basis.iter().enumerate() {
            out.entry(b).or_default().push(i);
        }
        out
    }

    /// Block of a nonzero homogeneous vector.
    pub fn block_of(&self, v: &[Q]) -> Option<(i32, usize)> {
        v.iter().position(|x| !x.is_zero()).map(|i| self.basis[i])
    }

    /// Submodule generated by homogeneous vectors, as a list of homogeneous
    /// basis vectors.
    pub fn generate(&self, vecs: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let mut span = Span::new(self.dim());
        let mut out = Vec::new();
        let mut queue: Vec<Vec<Q>> = vecs.to_vec();
        while let Some(v) = queue.pop() {
            if !span.insert(&v) {
                continue;
            }
            for &g in self.alg.generators() {
                let w = self.action[g].mul_vec(&v);
                if w.iter().any(|x| !x.is_zero()) && !span.contains(&w) {
                    queue.push(w);
                }
            }
            out.push(v);
        }
        out
    }

    /// `rad(A)·U` for a submodule `U` given by a basis.
    pub fn radical_of(&self, sub: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let mut span = Span::new(self.dim());
        let mut out = Vec::new();
        for u in sub {
            for &g in self.alg.generators() {
                let w = self.action[g].mul_vec(u);
                if span.insert(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Homogeneous vectors of `sub` whose classes form a basis of
    /// `sub / rad(sub)`.
    pub fn top_representatives(&self, sub: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let rad = self.radical_of(sub);
        let mut span = Span::new(self.dim());
        for r in &rad {
            span.insert(r);
        }
        let mut ordered: Vec<&Vec<Q>> = sub.iter().collect();
        ordered.sort_by_key(|v| self.block_of(v));
        ordered.into_iter().filter(|u| span.insert(u)).cloned().collect()
    }

    pub fn all_vectors(&self) -> Vec<Vec<Q>> {
        (0..self.dim())
            .map(|i| {
                let mut v = vec![Q::zero(); self.dim()];
                v[i] = Q::one();
                v
            })
            .collect()
    }

    pub fn radical(&self) -> GradedModule {
        let rad = self.radical_of(&self.all_vectors());
        self.submodule(&rad).0
    }

    pub fn top(&self) -> GradedModule {
        let rad = self.radical_of(&self.all_vectors());
        self.quotient(&rad).0
    }

    pub fn socle(&self) -> GradedModule {
        let mut stacked = Matrix::zeros(0, self.dim());
        for &g in self.alg.generators() {
            stacked = stacked.vstack(&self.action[g]);
        }
        let soc = kernel_blockwise(self, &stacked);
        self.submodule(&soc).0
    }

    /// Realizes a submodule given by homogeneous basis vectors; returns the
    /// module and the inclusion matrix.
    pub fn submodule(&self, sub: &[Vec<Q>]) -> (GradedModule, Matrix) {
        let mut sorted: Vec<Vec<Q>> = sub.to_vec();
        sorted.sort_by_key(|v| self.block_of(v));
        let incl = Matrix::from_columns(self.dim(), &sorted);
        let basis: Vec<(i32, usize)> = sorted.iter().map(|v| self.block_of(v).expect("nonzero vector")).collect();
        let action = self
            .action
            .iter()
            .map(|a| {
                if sorted.is_empty() {
                    return Matrix::zeros(0, 0);
                }
                incl.solve(&a.mul(&incl)).expect("subspace is a submodule")
            })
            .collect();
        (Self::raw(self.alg.clone(), basis, action), incl)
    }

    /// `M / U`; returns the quotient, the projection `M → M/U` and a section.
    pub fn quotient(&self, sub: &[Vec<Q>]) -> (GradedModule, Matrix, Matrix) {
        let n = self.dim();
        let mut span = Span::new(n);
        for u in sub {
            span.insert(u);
        }
        let mut comp = Vec::new();
        for (i, e) in self.all_vectors().into_iter().enumerate() {
            if span.insert(&e) {
                comp.push(i);
            }
        }
        let mut cols: Vec<Vec<Q>> = sub.to_vec();
        cols.extend(comp.iter().map(|&i| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        }));
        let t = Matrix::from_columns(n, &cols);
        let inv = t.inverse().expect("complement completes a basis");
        let rows: Vec<usize> = (sub.len()..n).collect();
        let proj = inv.select_rows(&rows);
        let section = Matrix::from_columns(n, &cols[sub.len()..]);
        let basis = comp.iter().map(|&i| self.basis[i]).collect();
        let action = self.action.iter().map(|a| proj.mul(&a.mul(&section))).collect();
        (Self::raw(self.alg.clone(), basis, action), proj, section)
    }

    /// `K / B` for submodules `B ⊆ K`.
    pub fn subquotient(&self, k: &[Vec<Q>], b: &[Vec<Q>]) -> GradedModule {
        let (kmod, incl) = self.submodule(k);
        if b.is_empty() {
            return kmod;
        }
        let bm = Matrix::from_columns(self.dim(), b);
        let coords = incl.solve(&bm).expect("B is contained in K");
        let bvecs: Vec<Vec<Q>> = (0..coords.cols()).map(|j| coords.column(j)).collect();
        kmod.quotient(&bvecs).0
    }

    /// Whether `f: self → other` is a degree-0 module homomorphism.
    pub fn is_hom_to(&self, other: &GradedModule, f: &Matrix) -> bool {
        if !self.same_algebra(other) || f.rows() != other.dim() || f.cols() != self.dim() {
            return false;
        }
        for i in 0..other.dim() {
            for j in 0..self.dim() {
                if !f.get(i, j).is_zero() && other.basis[i] != self.basis[j] {
                    return false;
                }
            }
        }
        (0..self.alg.dim()).all(|a| f.mul(&self.action[a]) == other.action[a].mul(f))
    }

    /// Basis of the space of degree-0 homomorphisms `self → other`.
    pub fn hom(&self, other: &GradedModule) -> Result<Vec<Matrix>, Error> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let (m, n) = (self.dim(), other.dim());
        // unknowns f[i][j] for matching blocks
        let mut var = vec![vec![None; m]; n];
        let mut nvars = 0;
        for i in 0..n {
            for j in 0..m {
                if other.basis[i] == self.basis[j] {
                    var[i][j] = Some(nvars);
                    nvars += 1;
                }
            }
        }
        let mut span = Span::new(nvars);
        for &g in self.alg.generators() {
            let am = &self.action[g];
            let an = &other.action[g];
            for j in 0..m {
                // f(g·m_j) - g·f(m_j) = 0, coordinate i
                for i in 0..n {
                    let mut row = vec![Q::zero(); nvars];
                    let mut nonzero = false;
                    for k in 0..m {
                        let c = am.get(k, j);
                        if c.is_zero() {
                            continue;
                        }
                        if let Some(x) = var[i][k] {
                            row[x] += c;
                            nonzero = true;
                        }
                    }
                    for k in 0..n {
                        let c = an.get(i, k);
                        if c.is_zero() {
                            continue;
                        }
                        if let Some(x) = var[k][j] {
                            row[x] -= c;
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        span.insert(&row);
                    }
                }
            }
        }
        Ok(span
            .nullspace()
            .into_iter()
            .map(|sol| {
                let mut f = Matrix::zeros(n, m);
                for i in 0..n {
                    for j in 0..m {
                        if let Some(x) = var[i][j] {
                            f.set(i, j, sol[x].clone());
                        }
                    }
                }
                f
            })
            .collect())
    }

    /// The same module with its basis reordered by `perm` (new index `i`
    /// holds old basis vector `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> GradedModule {
        let n = self.dim();
        let mut p = Matrix::zeros(n, n);
        for (i, &old) in perm.iter().enumerate() {
            p.set(i, old, Q::one());
        }
        let pt = p.transpose();
        Self::raw(
            self.alg.clone(),
            perm.iter().map(|&i| self.basis[i]).collect(),
            self.action.iter().map(|a| p.mul(&a.mul(&pt))).collect(),
        )
    }

    pub fn dump(&self) -> ModuleDump {
        let names = self.alg.vertices();
        ModuleDump {
            algebra: self.alg.name().to_string(),
            basis: self.basis.iter().map(|&(d, v)| (names[v].clone(), d)).collect(),
            graded_dims: self.graded_dims().into_iter().map(|((v, d), n)| (names[v].clone(), d, n)).collect(),
            actions: self
                .alg
                .generators()
                .iter()
                .map(|&g| (self.alg.basis()[g].label.clone(), self.action[g].clone()))
                .collect(),
        }
    }
}

/// Kernel of `f` restricted to each block of `src`, as homogeneous vectors.
pub fn kernel_blockwise(src: &GradedModule, f: &Matrix) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for idx in src.blocks().values() {
        let sub = f.select_cols(idx);
        for v in sub.nullspace() {
            let mut full = vec![Q::zero(); src.dim()];
            for (k, &i) in idx.iter().enumerate() {
                full[i] = v[k].clone();
            }
            out.push(full);
        }
    }
    out
}

/// Image of a degree-0 map `f: src → dst`, as homogeneous vectors of `dst`.
pub fn image_blockwise(src: &GradedModule, f: &Matrix) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for idx in src.blocks().values() {
        let sub = f.select_cols(idx);
        for c in sub.column_basis() {
            out.push(sub.column(c));
        }
    }
    out
}
