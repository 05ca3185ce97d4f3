//! Bundled algebra presentations and generated families.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterGroup, CoxeterSystem, Element};
use crate::error::Error;
use crate::findimalg::{Arrow, BasisElt, Coeff, GradedAlgebra, Quiver, RelationTerm, SparseVec, DEFAULT_DEGREE_CAP};
use crate::linalg::q;

const SL2: &str = include_str!("../data/sl2.json");
const SL4_CELL: &str = include_str!("../data/sl4_cell.json");

/// Coxeter-theoretic annotations of a presentation. Elements are written as
/// words `s1s2…` or `e`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub coxeter_type: String,
    /// vertex → Weyl group element
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub duflo: Vec<String>,
    /// element → a-value
    #[serde(default)]
    pub a_values: BTreeMap<String, u32>,
    /// The Duflo element whose cell cuts out a parabolic or cell subcategory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguished: Option<String>,
    #[serde(default)]
    pub projective_injective: Vec<String>,
    /// Vertices whose simple module is a CY object.
    #[serde(default)]
    pub cy_simples: Vec<String>,
}

impl Metadata {
    pub fn group(&self) -> Result<CoxeterGroup, Error> {
        CoxeterGroup::new(CoxeterSystem::parse_type(&self.coxeter_type)?)
    }

    pub fn label_of(&self, g: &CoxeterGroup, vertex: &str) -> Result<Element, Error> {
        let w = self.labels.get(vertex).ok_or_else(|| Error::Parse(format!("no label for vertex `{vertex}`")))?;
        g.parse(w)
    }

    /// Looks up `a(w)` among the recorded values.
    pub fn a_of(&self, g: &CoxeterGroup, w: Element) -> Result<Option<u32>, Error> {
        for (k, &a) in &self.a_values {
            if g.parse(k)? == w {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    Quiver(Quiver),
    StructureConstants { vertices: Vec<String>, basis: Vec<BasisElt>, mult: Vec<Vec<SparseVec>> },
}

#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub name: String,
    pub description: String,
    pub source: Source,
    pub metadata: Option<Metadata>,
    built: OnceLock<Arc<GradedAlgebra>>,
}

#[derive(Deserialize)]
struct PresentationFile {
    name: Option<String>,
    #[serde(default)]
    description: String,
    quiver: Quiver,
    metadata: Option<Metadata>,
}

impl AlgebraPresentation {
    pub fn from_quiver(name: &str, description: &str, quiver: Quiver, metadata: Option<Metadata>) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            source: Source::Quiver(quiver),
            metadata,
            built: OnceLock::new(),
        }
    }

    /// Accepts a presentation file (`{name, quiver, metadata}`) or a bare
    /// quiver.
    pub fn from_json(text: &str, fallback_name: &str) -> Result<Self, Error> {
        if let Ok(f) = serde_json::from_str::<PresentationFile>(text) {
            let name = f.name.unwrap_or_else(|| fallback_name.to_string());
            return Ok(Self::from_quiver(&name, &f.description, f.quiver, f.metadata));
        }
        Ok(Self::from_quiver(fallback_name, "", Quiver::from_json(text)?, None))
    }

    /// The algebra, built once and shared by later calls.
    pub fn algebra(&self) -> Result<Arc<GradedAlgebra>, Error> {
        if let Some(a) = self.built.get() {
            return Ok(a.clone());
        }
        let a = match &self.source {
            Source::Quiver(qv) => GradedAlgebra::from_quiver(&self.name, qv, DEFAULT_DEGREE_CAP)?,
            Source::StructureConstants { vertices, basis, mult } => {
                GradedAlgebra::from_structure_constants(&self.name, vertices.clone(), basis.clone(), mult.clone())?
            }
        };
        Ok(self.built.get_or_init(|| a).clone())
    }

    pub fn quiver(&self) -> Option<&Quiver> {
        match &self.source {
            Source::Quiver(qv) => Some(qv),
            Source::StructureConstants { .. } => None,
        }
    }

    pub fn metadata(&self) -> Result<&Metadata, Error> {
        self.metadata.as_ref().ok_or_else(|| Error::Parse(format!("`{}` carries no Coxeter metadata", self.name)))
    }

    pub fn to_json(&self) -> Option<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            name: &'a str,
            description: &'a str,
            quiver: &'a Quiver,
            #[serde(skip_serializing_if = "Option::is_none")]
            metadata: &'a Option<Metadata>,
        }
        let quiver = self.quiver()?;
        let out = Out { name: &self.name, description: &self.description, quiver, metadata: &self.metadata };
        Some(serde_json::to_string_pretty(&out).expect("presentation serializes"))
    }
}

fn bundled(text: &str) -> AlgebraPresentation {
    AlgebraPresentation::from_json(text, "bundled").expect("bundled presentation parses")
}

/// The principal block of O for sl₂: `a: s → e`, `b: e → s`, `ab = 0`.
pub fn sl2_block() -> AlgebraPresentation {
    bundled(SL2)
}

/// The four-vertex cell subcategory of the sl₄ principal block.
pub fn cell_subcategory_sl4() -> AlgebraPresentation {
    bundled(SL4_CELL)
}

fn longest_word(n: usize) -> String {
    // s1 (s2 s1) (s3 s2 s1) …
    let mut w = String::new();
    for k in 1..n {
        for j in (1..=k).rev() {
            w.push_str(&format!("s{j}"));
        }
    }
    if w.is_empty() {
        w.push('e');
    }
    w
}

/// Parabolic block of type `A_{n−1}/A_{n−2}`: vertices `1..n` joined by
/// `a_i: i → i+1` and `b_i: i+1 → i`.
pub fn parabolic_an(n: usize) -> Result<AlgebraPresentation, Error> {
    if n < 2 {
        return Err(Error::InvalidAlgebra("the parabolic family needs n ≥ 2".into()));
    }
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 1..n {
        arrows.push(Arrow { name: format!("a{i}"), src: i.to_string(), dst: (i + 1).to_string(), degree: 1 });
        arrows.push(Arrow { name: format!("b{i}"), src: (i + 1).to_string(), dst: i.to_string(), degree: 1 });
    }
    let term = |c: i64, path: &[String]| RelationTerm { coeff: Coeff::Int(c), path: path.to_vec() };
    let mut relations = Vec::new();
    for i in 1..n.saturating_sub(1) {
        relations.push(vec![term(1, &[format!("a{}", i + 1), format!("a{i}")])]);
        relations.push(vec![term(1, &[format!("b{i}"), format!("b{}", i + 1)])]);
        relations.push(vec![
            term(1, &[format!("a{i}"), format!("b{i}")]),
            term(-1, &[format!("b{}", i + 1), format!("a{}", i + 1)]),
        ]);
    }
    relations.push(vec![term(1, &[format!("a{}", n - 1), format!("b{}", n - 1)])]);

    let mut labels = BTreeMap::new();
    for k in 1..n {
        let w: String = (k..n).rev().map(|j| format!("s{j}")).collect();
        labels.insert(k.to_string(), w);
    }
    labels.insert(n.to_string(), "e".into());
    let d = format!("s{}", n - 1);
    let w0 = longest_word(n);
    let a_w0 = (n * (n - 1) / 2) as u32;
    let a_w0d = ((n - 1) * (n - 2) / 2) as u32;
    let mut a_values = BTreeMap::from([("e".to_string(), 0), (d.clone(), 1), (w0.clone(), a_w0)]);
    a_values.insert(if w0 == "e" { d.clone() } else { format!("{w0}{d}") }, a_w0d);
    let metadata = Metadata {
        coxeter_type: format!("A{}", n - 1),
        labels,
        duflo: vec!["e".into(), d.clone()],
        a_values,
        distinguished: Some(d),
        projective_injective: (1..n).map(|i| i.to_string()).collect(),
        cy_simples: vec![n.to_string()],
    };
    Ok(AlgebraPresentation::from_quiver(
        &format!("parabolic{n}"),
        &format!("parabolic block of type A{}/A{}", n - 1, n.saturating_sub(2)),
        Quiver { vertices, arrows, relations },
        Some(metadata),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    /// generators in degree 1
    Natural,
    /// generators in degree 2
    CategoryO,
}

impl Grading {
    fn scale(self) -> i32 {
        match self {
            Grading::Natural => 1,
            Grading::CategoryO => 2,
        }
    }
}

/// `k[x₁,…,x_n]` modulo the positive-degree symmetric polynomials, with a
/// basis of staircase monomials `x^a`, `a_k ≤ n−k`.
pub fn coinvariant_type_a(n: usize, grading: Grading) -> Result<AlgebraPresentation, Error> {
    if n < 2 {
        return Err(Error::InvalidAlgebra("coinvariant algebras need n ≥ 2".into()));
    }
    let (basis, mult) = coinvariant_structure(n, grading.scale());
    let suffix = if grading == Grading::CategoryO { "_O" } else { "" };
    Ok(AlgebraPresentation {
        name: format!("coinvariant{n}{suffix}"),
        description: format!("coinvariant algebra of S{n}"),
        source: Source::StructureConstants { vertices: vec!["o".into()], basis, mult },
        metadata: None,
        built: OnceLock::new(),
    })
}

/// The same algebra as a one-vertex quiver: commuting loops `x1..xn` killed
/// by the elementary symmetric polynomials.
pub fn coinvariant_quiver(n: usize, grading: Grading) -> Quiver {
    let arrows: Vec<Arrow> = (1..=n)
        .map(|i| Arrow { name: format!("x{i}"), src: "o".into(), dst: "o".into(), degree: grading.scale() })
        .collect();
    let mut relations = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            relations.push(vec![
                RelationTerm { coeff: Coeff::Int(1), path: vec![format!("x{i}"), format!("x{j}")] },
                RelationTerm { coeff: Coeff::Int(-1), path: vec![format!("x{j}"), format!("x{i}")] },
            ]);
        }
    }
    for k in 1..=n {
        let rel = subsets(n, k)
            .into_iter()
            .map(|s| RelationTerm { coeff: Coeff::Int(1), path: s.iter().map(|i| format!("x{}", i + 1)).collect() })
            .collect();
        relations.push(rel);
    }
    Quiver { vertices: vec!["o".into()], arrows, relations }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Exponent vectors of degree `d` in the first `vars` variables of `n`.
fn monomials(n: usize, vars: usize, d: usize) -> Vec<Vec<u8>> {
    fn go(i: usize, vars: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i + 1 == vars {
            cur[i] = left as u8;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u8;
            go(i + 1, vars, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, vars, d, &mut vec![0; n], &mut out);
    out
}

struct Reducer {
    n: usize,
    index: HashMap<Vec<u8>, usize>,
    memo: HashMap<Vec<u8>, Vec<(usize, i64)>>,
}

impl Reducer {
    /// Normal form modulo the Gröbner basis `h_{n−k+1}(x₁..x_k)`, whose
    /// leading terms are `x_k^{n−k+1}` for the order `x_n > … > x₁`.
    fn normal_form(&mut self, a: &[u8]) -> Vec<(usize, i64)> {
        if let Some(&i) = self.index.get(a) {
            return vec![(i, 1)];
        }
        if let Some(v) = self.memo.get(a) {
            return v.clone();
        }
        let n = self.n;
        let k = (0..n).rev().find(|&k| a[k] as usize > n - 1 - k).expect("non-standard monomial");
        let p = n - k;
        let mut rest = a.to_vec();
        rest[k] -= p as u8;
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for mu in monomials(n, k + 1, p) {
            if mu[k] as usize == p {
                continue;
            }
            let b: Vec<u8> = rest.iter().zip(&mu).map(|(x, y)| x + y).collect();
            for (i, c) in self.normal_form(&b) {
                *acc.entry(i).or_default() -= c;
            }
        }
        let v: Vec<(usize, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        self.memo.insert(a.to_vec(), v.clone());
        v
    }
}

fn monomial_label(a: &[u8]) -> String {
    let mut s = String::new();
    for (i, &e) in a.iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!("x{}", i + 1)),
            _ => s.push_str(&format!("x{}^{e}", i + 1)),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

fn coinvariant_structure(n: usize, scale: i32) -> (Vec<BasisElt>, Vec<Vec<SparseVec>>) {
    let mut std: Vec<Vec<u8>> = vec![vec![0; n]];
    for k in 0..n {
        let mut next = Vec::new();
        for a in &std {
            for e in 0..(n - k) as u8 {
                let mut b = a.clone();
                b[k] = e;
                next.push(b);
            }
        }
        std = next;
    }
    let deg = |a: &Vec<u8>| a.iter().map(|&e| e as i32).sum::<i32>();
    std.sort_by(|x, y| deg(x).cmp(&deg(y)).then_with(|| y.cmp(x)));
    let index = std.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let mut red = Reducer { n, index, memo: HashMap::new() };
    let basis = std
        .iter()
        .map(|a| BasisElt { degree: scale * deg(a), source: 0, target: 0, label: monomial_label(a) })
        .collect();
    let mult = std
        .iter()
        .map(|a| {
            std.iter()
                .map(|b| {
                    let c: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    red.normal_form(&c).into_iter().map(|(i, v)| (i, q(v))).collect()
                })
                .collect()
        })
        .collect();
    (basis, mult)
}

/// `k[x]/x²` with `x` in degree 1.
pub fn dual_numbers() -> AlgebraPresentation {
    let quiver = Quiver {
        vertices: vec!["o".into()],
        arrows: vec![Arrow { name: "x".into(), src: "o".into(), dst: "o".into(), degree: 1 }],
        relations: vec![vec![RelationTerm { coeff: Coeff::Int(1), path: vec!["x".into(), "x".into()] }]],
    };
    AlgebraPresentation::from_quiver("dual", "dual numbers", quiver, None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
}

/// Names accepted by [`by_name`], with the generated families listed at
/// their smallest interesting sizes.
pub fn list() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry { name: "sl2".into(), description: sl2_block().description },
        CatalogEntry { name: "sl4_cell".into(), description: cell_subcategory_sl4().description },
        CatalogEntry { name: "dual".into(), description: "dual numbers".into() },
    ];
    for n in 2..=5 {
        out.push(CatalogEntry {
            name: format!("parabolic{n}"),
            description: format!("parabolic block of type A{}/A{}", n - 1, n - 2),
        });
    }
    for n in 2..=5 {
        out.push(CatalogEntry { name: format!("coinvariant{n}"), description: format!("coinvariant algebra of S{n}") });
        out.push(CatalogEntry {
            name: format!("coinvariant{n}_O"),
            description: format!("coinvariant algebra of S{n}, generators in degree 2"),
        });
    }
    out
}

/// Resolves a catalog name such as `sl2`, `parabolic4` or `coinvariant3_O`.
pub fn by_name(name: &str) -> Result<AlgebraPresentation, Error> {
    let unknown = || Error::Parse(format!("unknown algebra `{name}`; see `catalog list`"));
    match name {
        "sl2" => return Ok(sl2_block()),
        "sl4_cell" => return Ok(cell_subcategory_sl4()),
        "dual" => return Ok(dual_numbers()),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("parabolic") {
        return parabolic_an(rest.parse().map_err(|_| unknown())?);
    }
    if let Some(rest) = name.strip_prefix("coinvariant") {
        let (num, grading) = match rest.strip_suffix("_O") {
            Some(r) => (r, Grading::CategoryO),
            None => (rest, Grading::Natural),
        };
        return coinvariant_type_a(num.parse().map_err(|_| unknown())?, grading);
    }
    Err(unknown())
}
