use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, Weak};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{Matrix, Span, Q};

pub const DEFAULT_DEGREE_CAP: i32 = 64;

/// Sparse vector in the algebra basis.
pub type SparseVec = Vec<(usize, Q)>;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElt {
    pub degree: i32,
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// A basic graded algebra with a basis of paths. The product `a·b` means
/// "first `b`, then `a`" and is nonzero only when `source(a) = target(b)`.
pub struct GradedAlgebra {
    id: u64,
    name: String,
    vertices: Vec<String>,
    basis: Vec<BasisElt>,
    mult: Vec<Vec<SparseVec>>,
    arrows: Vec<(String, SparseVec)>,
    generators: Vec<usize>,
    opposite: OnceLock<Arc<GradedAlgebra>>,
    original: Weak<GradedAlgebra>,
}

impl std::fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedAlgebra")
            .field("name", &self.name)
            .field("vertices", &self.vertices)
            .field("dim", &self.basis.len())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: String,
    pub dst: String,
    #[serde(default = "one_i32")]
    pub degree: i32,
}

fn one_i32() -> i32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn value(&self) -> Result<Q, Error> {
        match self {
            Coeff::Int(n) => Ok(crate::linalg::q(*n)),
            Coeff::Text(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationTerm {
    pub coeff: Coeff,
    /// Arrow names in written order; the rightmost arrow is traversed first.
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub relations: Vec<Vec<RelationTerm>>,
}

impl Quiver {
    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("quiver serializes")
    }
}

struct ArrowData {
    src: usize,
    dst: usize,
    degree: i32,
}

impl GradedAlgebra {
    pub fn from_quiver(name: &str, quiver: &Quiver, degree_cap: i32) -> Result<Arc<Self>, Error> {
        let nv = quiver.vertices.len();
        if nv == 0 {
            return Err(Error::InvalidAlgebra("no vertices".into()));
        }
        let vidx: HashMap<&str, usize> = quiver.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if vidx.len() != nv {
            return Err(Error::InvalidAlgebra("duplicate vertex names".into()));
        }
        let mut arrows = Vec::new();
        let mut aidx = HashMap::new();
        for a in &quiver.arrows {
            let src = *vidx.get(a.src.as_str()).ok_or_else(|| Error::Unknown(a.src.clone()))?;
            let dst = *vidx.get(a.dst.as_str()).ok_or_else(|| Error::Unknown(a.dst.clone()))?;
            if a.degree < 1 {
                return Err(Error::InvalidAlgebra(format!("arrow {} has degree {}", a.name, a.degree)));
            }
            if aidx.insert(a.name.as_str(), arrows.len()).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate arrow {}", a.name)));
            }
            arrows.push(ArrowData { src, dst, degree: a.degree });
        }
        let max_arrow_degree = arrows.iter().map(|a| a.degree).max().unwrap_or(1);

        // relation components: (degree, source, terms as (coeff, arrow indices written order))
        let mut relations: Vec<(i32, usize, Vec<(Q, Vec<usize>)>)> = Vec::new();
        for rel in &quiver.relations {
            let mut comps: BTreeMap<(usize, usize), Vec<(Q, Vec<usize>)>> = BTreeMap::new();
            let mut degree = None;
            for term in rel {
                if term.path.is_empty() {
                    return Err(Error::InvalidAlgebra("relations must not involve idempotents".into()));
                }
                let path = term
                    .path
                    .iter()
                    .map(|n| aidx.get(n.as_str()).copied().ok_or_else(|| Error::Unknown(n.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                for w in path.windows(2) {
                    if arrows[w[0]].src != arrows[w[1]].dst {
                        return Err(Error::InvalidAlgebra(format!("path {:?} is not composable", term.path)));
                    }
                }
                let d: i32 = path.iter().map(|&a| arrows[a].degree).sum();
                if *degree.get_or_insert(d) != d {
                    return Err(Error::InvalidAlgebra("relation is not homogeneous".into()));
                }
                let key = (arrows[*path.last().unwrap()].src, arrows[path[0]].dst);
                comps.entry(key).or_default().push((term.coeff.value()?, path));
            }
            if let Some(d) = degree {
                for ((s, _), terms) in comps {
                    relations.push((d, s, terms));
                }
            }
        }

        let mut basis: Vec<BasisElt> = quiver
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| BasisElt { degree: 0, source: i, target: i, label: format!("e_{v}") })
            .collect();
        // decomposition of each basis element of positive degree as (arrow, rest)
        let mut decomp: Vec<Option<(usize, usize)>> = vec![None; nv];
        let mut by_degree: Vec<Vec<usize>> = vec![(0..nv).collect()];
        // left multiplication by arrows on basis elements
        let mut left: HashMap<(usize, usize), SparseVec> = HashMap::new();
        let mut zero_run = 0;
        let mut d = 0;
        loop {
            d += 1;
            if zero_run >= max_arrow_degree {
                break;
            }
            if d > degree_cap {
                return Err(Error::NotFiniteDimensional { degree_cap });
            }
            let mut coords: Vec<(usize, usize)> = Vec::new();
            for (ai, a) in arrows.iter().enumerate() {
                let k = d - a.degree;
                if k < 0 || k as usize >= by_degree.len() {
                    continue;
                }
                for &b in &by_degree[k as usize] {
                    if basis[b].target == a.src {
                        coords.push((ai, b));
                    }
                }
            }
            let cidx: HashMap<(usize, usize), usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let apply_left = |a: usize, v: &SparseVec, left: &HashMap<(usize, usize), SparseVec>| -> SparseVec {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (b, c) in v {
                    if let Some(img) = left.get(&(a, *b)) {
                        for (x, y) in img {
                            *acc.entry(*x).or_insert_with(Q::zero) += c * y;
                        }
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            };
            let mut span = Span::new(coords.len());
            for (rd, rsrc, terms) in &relations {
                let k = d - rd;
                if k < 0 || k as usize >= by_degree.len() {
                    continue;
                }
                for &qb in &by_degree[k as usize] {
                    if basis[qb].target != *rsrc {
                        continue;
                    }
                    let mut v = vec![Q::zero(); coords.len()];
                    for (c, path) in terms {
                        let mut cur: SparseVec = vec![(qb, Q::one())];
                        for &a in path[1..].iter().rev() {
                            cur = apply_left(a, &cur, &left);
                        }
                        for (b, x) in cur {
                            let col = cidx[&(path[0], b)];
                            v[col] += c * &x;
                        }
                    }
                    span.insert(&v);
                }
            }
            let mut pivot_row = vec![None; coords.len()];
            for (r, &p) in span.pivots().iter().enumerate() {
                pivot_row[p] = Some(r);
            }
            let mut new_index = vec![usize::MAX; coords.len()];
            let mut layer = Vec::new();
            for (col, &(a, b)) in coords.iter().enumerate() {
                if pivot_row[col].is_some() {
                    continue;
                }
                let idx = basis.len();
                new_index[col] = idx;
                let label = if basis[b].degree == 0 {
                    quiver.arrows[a].name.clone()
                } else {
                    format!("{}.{}", quiver.arrows[a].name, basis[b].label)
                };
                basis.push(BasisElt { degree: d, source: basis[b].source, target: arrows[a].dst, label });
                decomp.push(Some((a, b)));
                layer.push(idx);
            }
            for (col, &(a, b)) in coords.iter().enumerate() {
                let img: SparseVec = match pivot_row[col] {
                    None => vec![(new_index[col], Q::one())],
                    Some(r) => span.basis()[r]
                        .iter()
                        .enumerate()
                        .filter(|(j, x)| *j != col && !x.is_zero())
                        .map(|(j, x)| (new_index[j], -x.clone()))
                        .collect(),
                };
                left.insert((a, b), img);
            }
            zero_run = if layer.is_empty() { zero_run + 1 } else { 0 };
            by_degree.push(layer);
        }

        let n = basis.len();
        let mut mult: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                if basis[a].source != basis[b].target {
                    continue;
                }
                mult[a][b] = match decomp[a] {
                    None => vec![(b, Q::one())],
                    Some(_) if decomp[b].is_none() => vec![(a, Q::one())],
                    Some((arr, rest)) => {
                        let inner = mult[rest][b].clone();
                        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                        for (x, c) in &inner {
                            if let Some(img) = left.get(&(arr, *x)) {
                                for (y, e) in img {
                                    *acc.entry(*y).or_insert_with(Q::zero) += c * e;
                                }
                            }
                        }
                        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                    }
                };
            }
        }
        let arrow_elems = quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.clone(), left.get(&(i, arrows[i].src)).cloned().unwrap_or_default()))
            .collect();
        Ok(Arc::new(Self::assemble(name, quiver.vertices.clone(), basis, mult, arrow_elems, Weak::new())))
    }

    /// Builds an algebra from explicit structure constants and checks the
    /// axioms.
    pub fn from_structure_constants(
        name: &str,
        vertices: Vec<String>,
        basis: Vec<BasisElt>,
        mult: Vec<Vec<SparseVec>>,
    ) -> Result<Arc<Self>, Error> {
        if mult.len() != basis.len() || mult.iter().any(|r| r.len() != basis.len()) {
            return Err(Error::InvalidAlgebra("structure constant table has the wrong size".into()));
        }
        let alg = Self::assemble(name, vertices, basis, mult, Vec::new(), Weak::new());
        alg.check_axioms()?;
        Ok(Arc::new(alg))
    }

    fn assemble(
        name: &str,
        vertices: Vec<String>,
        basis: Vec<BasisElt>,
        mult: Vec<Vec<SparseVec>>,
        arrows: Vec<(String, SparseVec)>,
        original: Weak<GradedAlgebra>,
    ) -> Self {
        let mut alg = Self {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.to_string(),
            vertices,
            basis,
            mult,
            arrows,
            generators: Vec::new(),
            opposite: OnceLock::new(),
            original,
        };
        alg.generators = alg.compute_generators();
        alg
    }

    fn compute_generators(&self) -> Vec<usize> {
        let n = self.basis.len();
        let mut span = Span::new(n);
        for a in 0..n {
            if self.basis[a].degree == 0 {
                continue;
            }
            for b in 0..n {
                if self.basis[b].degree == 0 || self.mult[a][b].is_empty() {
                    continue;
                }
                span.insert(&self.dense(&self.mult[a][b]));
            }
        }
        let mut gens = Vec::new();
        for a in 0..n {
            if self.basis[a].degree > 0 {
                let mut v = vec![Q::zero(); n];
                v[a] = Q::one();
                if span.insert(&v) {
                    gens.push(a);
                }
            }
        }
        gens
    }

    pub fn check_axioms(&self) -> Result<(), Error> {
        let nv = self.vertices.len();
        let n = self.basis.len();
        if n < nv {
            return Err(Error::InvalidAlgebra("missing idempotents".into()));
        }
        for (i, b) in self.basis.iter().enumerate() {
            if b.source >= nv || b.target >= nv {
                return Err(Error::InvalidAlgebra(format!("basis element {i} has an invalid vertex")));
            }
            if i < nv && (b.degree != 0 || b.source != i || b.target != i) {
                return Err(Error::InvalidAlgebra("the first basis elements must be the idempotents".into()));
            }
            if i >= nv && b.degree < 1 {
                return Err(Error::InvalidAlgebra(format!("basis element {} has non-positive degree", b.label)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let p = &self.mult[a][b];
                if self.basis[a].source != self.basis[b].target && !p.is_empty() {
                    return Err(Error::InvalidAlgebra(format!("non-composable product {a}·{b} is nonzero")));
                }
                for (c, x) in p {
                    if x.is_zero() {
                        continue;
                    }
                    let (bc, ba, bb) = (&self.basis[*c], &self.basis[a], &self.basis[b]);
                    if bc.degree != ba.degree + bb.degree || bc.source != bb.source || bc.target != ba.target {
                        return Err(Error::InvalidAlgebra(format!("product {a}·{b} is not homogeneous")));
                    }
                }
            }
        }
        for v in 0..nv {
            for b in 0..n {
                let left_ok = if self.basis[b].target == v { self.mult[v][b] == vec![(b, Q::one())] } else { self.mult[v][b].is_empty() };
                let right_ok = if self.basis[b].source == v { self.mult[b][v] == vec![(b, Q::one())] } else { self.mult[b][v].is_empty() };
                if !left_ok || !right_ok {
                    return Err(Error::InvalidAlgebra("idempotents do not act as a unit".into()));
                }
            }
        }
        for a in nv..n {
            for b in nv..n {
                if self.mult[a][b].is_empty() {
                    continue;
                }
                for c in nv..n {
                    let left = self.mul_vec_right(&self.mult[a][b], c);
                    let right = self.mul_vec_left(a, &self.mult[b][c]);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!("associativity fails on ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_vec_right(&self, v: &SparseVec, c: usize) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (x, k) in v {
            for (y, e) in &self.mult[*x][c] {
                *acc.entry(*y).or_insert_with(Q::zero) += k * e;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn mul_vec_left(&self, a: usize, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (x, k) in v {
            for (y, e) in &self.mult[a][*x] {
                *acc.entry(*y).or_insert_with(Q::zero) += k * e;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Product of two arbitrary elements given as dense vectors.
    pub fn multiply(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                for (c, e) in &self.mult[a][b] {
                    out[*c] += xa * yb * e;
                }
            }
        }
        out
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, name: &str) -> Result<usize, Error> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::Unknown(name.to_string()))
    }

    pub fn basis(&self) -> &[BasisElt] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mult(&self, a: usize, b: usize) -> &SparseVec {
        &self.mult[a][b]
    }

    /// Positive-degree basis elements which, with the idempotents, generate
    /// the algebra.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Arrow elements when the algebra came from a quiver.
    pub fn arrows(&self) -> &[(String, SparseVec)] {
        &self.arrows
    }

    pub fn dense(&self, v: &SparseVec) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, x) in v {
            out[*i] += x;
        }
        out
    }

    /// Basis elements `b` with `source(b) = v`, i.e. a basis of `A e_v`.
    pub fn paths_from(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.basis[b].source == v).collect()
    }

    /// Basis elements `b` with `target(b) = v`, i.e. a basis of `e_v A`.
    pub fn paths_to(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.basis[b].target == v).collect()
    }

    pub fn hilbert_series(&self) -> BTreeMap<i32, usize> {
        let mut h = BTreeMap::new();
        for b in &self.basis {
            *h.entry(b.degree).or_insert(0) += 1;
        }
        h
    }

    pub fn top_degree(&self) -> i32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    /// The opposite algebra. Taking the opposite twice gives back the same
    /// `Arc`.
    pub fn opposite(self: &Arc<Self>) -> Arc<Self> {
        if let Some(orig) = self.original.upgrade() {
            return orig;
        }
        self.opposite
            .get_or_init(|| {
                let basis = self
                    .basis
                    .iter()
                    .map(|b| BasisElt { degree: b.degree, source: b.target, target: b.source, label: b.label.clone() })
                    .collect();
                let n = self.dim();
                let mult = (0..n).map(|a| (0..n).map(|b| self.mult[b][a].clone()).collect()).collect();
                Arc::new(Self::assemble(
                    &format!("{}^op", self.name),
                    self.vertices.clone(),
                    basis,
                    mult,
                    self.arrows.clone(),
                    Arc::downgrade(self),
                ))
            })
            .clone()
    }

    /// Matrix of left multiplication by basis element `a` on the whole
    /// algebra.
    pub fn left_mult_matrix(&self, a: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            for (c, x) in &self.mult[a][b] {
                m.set(*c, b, x.clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> Quiver {
        Quiver::from_json(
            r#"{"vertices":["s","e"],
                "arrows":[{"name":"a","src":"s","dst":"e"},{"name":"b","src":"e","dst":"s"}],
                "relations":[[{"coeff":1,"path":["a","b"]}]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn sl2_block_has_dimension_five() {
        let a = GradedAlgebra::from_quiver("sl2", &sl2(), DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.paths_from(1).len(), 2);
        assert_eq!(a.paths_from(0).len(), 3);
        a.check_axioms().unwrap();
        let labels: Vec<&str> = a.basis().iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, vec!["e_s", "e_e", "a", "b", "b.a"]);
    }

    #[test]
    fn dual_numbers_and_infinite_quiver() {
        let q = Quiver::from_json(
            r#"{"vertices":["o"],"arrows":[{"name":"x","src":"o","dst":"o"}],
                "relations":[[{"coeff":1,"path":["x","x"]}]]}"#,
        )
        .unwrap();
        let a = GradedAlgebra::from_quiver("dual", &q, 10).unwrap();
        assert_eq!(a.dim(), 2);
        let free = Quiver { relations: vec![], ..q };
        assert_eq!(
            GradedAlgebra::from_quiver("free", &free, 10).unwrap_err(),
            Error::NotFiniteDimensional { degree_cap: 10 }
        );
    }

    #[test]
    fn commutative_relations_with_coefficients() {
        let q = Quiver::from_json(
            r#"{"vertices":["o"],
                "arrows":[{"name":"x","src":"o","dst":"o"},{"name":"y","src":"o","dst":"o"}],
                "relations":[[{"coeff":1,"path":["x","y"]},{"coeff":-1,"path":["y","x"]}],
                             [{"coeff":1,"path":["x"]},{"coeff":1,"path":["y"]}],
                             [{"coeff":1,"path":["x","x","x"]}]]}"#,
        )
        .unwrap();
        let a = GradedAlgebra::from_quiver("c2", &q, 10).unwrap();
        assert_eq!(a.hilbert_series(), BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        a.check_axioms().unwrap();
    }

    #[test]
    fn opposite_round_trips() {
        let a = GradedAlgebra::from_quiver("sl2", &sl2(), DEFAULT_DEGREE_CAP).unwrap();
        let op = a.opposite();
        assert!(Arc::ptr_eq(&op.opposite(), &a));
        assert!(Arc::ptr_eq(&a.opposite(), &op));
        op.check_axioms().unwrap();
        assert_eq!(op.paths_from(1).len(), 2);
    }

    #[test]
    fn rejects_bad_presentations() {
        let mut q = sl2();
        q.relations = vec![vec![
            RelationTerm { coeff: Coeff::Int(1), path: vec!["a".into(), "b".into()] },
            RelationTerm { coeff: Coeff::Int(1), path: vec!["a".into()] },
        ]];
        assert!(matches!(GradedAlgebra::from_quiver("bad", &q, 8), Err(Error::InvalidAlgebra(_))));
        let mut q = sl2();
        q.relations = vec![vec![RelationTerm { coeff: Coeff::Int(1), path: vec!["a".into(), "a".into()] }]];
        assert!(matches!(GradedAlgebra::from_quiver("bad", &q, 8), Err(Error::InvalidAlgebra(_))));
    }
}
