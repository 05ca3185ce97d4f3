//! Kazhdan-Lusztig cells, Duflo involutions and Lusztig's a-function.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterGroup, Element};
use crate::error::Error;
use crate::hecke::KLTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    Left,
    Right,
    TwoSided,
}

impl std::str::FromStr for CellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            "two-sided" | "twosided" | "two_sided" => Ok(Self::TwoSided),
            _ => Err(Error::Parse(format!("unknown cell kind `{s}`"))),
        }
    }
}

/// A partition of the group into cells.
///
/// Classes are numbered by their smallest element; `preorder`, when known,
/// is the induced partial order with `leq(a, b)` meaning class `a` lies
/// below class `b` (the identity cell is the minimum).
#[derive(Clone, Debug)]
pub struct CellPartition {
    pub kind: CellKind,
    classes: Vec<Vec<Element>>,
    class_of: Vec<usize>,
    preorder: Option<Vec<Vec<bool>>>,
}

impl CellPartition {
    /// Builds a partition from a class label per element index.
    pub fn from_labels(g: &CoxeterGroup, kind: CellKind, labels: &[usize]) -> Self {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            first.entry(l).or_insert(i);
        }
        let mut order: Vec<(usize, usize)> = first.into_iter().map(|(l, i)| (i, l)).collect();
        order.sort_unstable();
        let renumber: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, &(_, l))| (l, k)).collect();
        let mut classes = vec![Vec::new(); order.len()];
        let class_of: Vec<usize> = labels.iter().map(|l| renumber[l]).collect();
        for (i, &c) in class_of.iter().enumerate() {
            classes[c].push(g.element(i));
        }
        Self {
            kind,
            classes,
            class_of,
            preorder: None,
        }
    }

    pub fn classes(&self) -> &[Vec<Element>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, w: Element) -> usize {
        self.class_of[w.index()]
    }

    pub(crate) fn class_of_idx(&self, w: usize) -> usize {
        self.class_of[w]
    }

    pub fn same_cell(&self, x: Element, y: Element) -> bool {
        self.class_of(x) == self.class_of(y)
    }

    /// `a ≤ b` in the cell order, if the order was computed.
    pub fn leq(&self, a: usize, b: usize) -> Option<bool> {
        self.preorder.as_ref().map(|p| p[a][b])
    }

    pub fn has_order(&self) -> bool {
        self.preorder.is_some()
    }

    /// Partitions agree as set partitions (class numbering may differ).
    pub fn same_partition(&self, other: &CellPartition) -> bool {
        if self.class_of.len() != other.class_of.len() || self.len() != other.len() {
            return false;
        }
        let mut map = vec![usize::MAX; self.len()];
        for (&a, &b) in self.class_of.iter().zip(&other.class_of) {
            if map[a] == usize::MAX {
                map[a] = b;
            } else if map[a] != b {
                return false;
            }
        }
        true
    }
}

/// Cells of one group computed from the `μ`-graph, with the a-function
/// cached per two-sided cell.
pub struct Cells<'a> {
    kl: &'a KLTable,
    left: CellPartition,
    right: CellPartition,
    two_sided: CellPartition,
    a_values: Vec<OnceLock<u32>>,
}

impl<'a> Cells<'a> {
    pub fn new(kl: &'a KLTable) -> Self {
        let left = compute_cells(kl, CellKind::Left);
        let right = compute_cells(kl, CellKind::Right);
        let two_sided = compute_cells(kl, CellKind::TwoSided);
        let a_values = (0..two_sided.len()).map(|_| OnceLock::new()).collect();
        Self {
            kl,
            left,
            right,
            two_sided,
            a_values,
        }
    }

    pub fn kl(&self) -> &KLTable {
        self.kl
    }

    pub fn group(&self) -> &CoxeterGroup {
        self.kl.group()
    }

    pub fn partition(&self, kind: CellKind) -> &CellPartition {
        match kind {
            CellKind::Left => &self.left,
            CellKind::Right => &self.right,
            CellKind::TwoSided => &self.two_sided,
        }
    }

    /// Lusztig's a-function: the largest `v`-degree of the `H̲_w`
    /// coefficient of `H̲_x H̲_y`, maximised over `x, y` in the two-sided
    /// cell of `w`.
    pub fn a_function(&self, w: Element) -> Result<u32, Error> {
        let w = self.group().check(w)?;
        Ok(self.a_idx(w))
    }

    pub(crate) fn a_idx(&self, w: usize) -> u32 {
        let c = self.two_sided.class_of_idx(w);
        *self.a_values[c].get_or_init(|| self.a_of_cell(c))
    }

    fn a_of_cell(&self, c: usize) -> u32 {
        let cell = &self.two_sided;
        let keep = |u: usize| cell.class_of_idx(u) == c;
        let mut best = i32::MIN;
        for y in &cell.classes[c] {
            let rows = self.kl.products_with(y.index(), &keep);
            for x in &cell.classes[c] {
                for p in rows[x.index()].values() {
                    best = best.max(p.degree().expect("nonzero coefficient"));
                }
            }
        }
        best.max(0) as u32
    }

    /// Distinguished involutions, one per left cell: `z² = e` and `a(z)`
    /// equals the lowest `v`-exponent of `h_{e,z}` (equivalently
    /// `a(z) = ℓ(z) - 2 deg P_{e,z}`).
    pub fn duflo_involutions(&self) -> Result<DufloData, Error> {
        let g = self.group();
        let mut cell_of = Vec::with_capacity(self.left.len());
        for (c, class) in self.left.classes.iter().enumerate() {
            let found: Vec<Element> = class
                .iter()
                .copied()
                .filter(|&z| {
                    g.is_involution(z)
                        && self
                            .kl
                            .h(0, z.index())
                            .map(|h| h.valuation().unwrap() == self.a_idx(z.index()) as i32)
                            .unwrap_or(false)
                })
                .collect();
            if found.len() != 1 {
                return Err(Error::CriterionAmbiguous {
                    cell: c,
                    found: found.len(),
                });
            }
            cell_of.push(found[0]);
        }
        let mut duflo = cell_of.clone();
        duflo.sort();
        Ok(DufloData { duflo, cell_of })
    }
}

/// Duflo involutions and the left cell each one represents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DufloData {
    pub duflo: Vec<Element>,
    /// Indexed by left-cell id.
    pub cell_of: Vec<Element>,
}

/// Cells as strongly connected components of the preorder generated by
/// `y ≤ x` whenever `μ(x,y) ≠ 0` or `μ(y,x) ≠ 0` and the descent set of `x`
/// is not contained in that of `y` (left descents for left cells, right
/// descents for right cells, both for two-sided cells).
pub fn compute_cells(kl: &KLTable, kind: CellKind) -> CellPartition {
    let g = kl.group();
    let n = g.len();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    let not_subset = |a: u64, b: u64| a & !b != 0;
    for y in 0..n {
        for &(x, _) in kl.mu_neighbours(y) {
            let x = x as usize;
            let left = not_subset(g.left_descents_of(x), g.left_descents_of(y));
            let right = not_subset(g.right_descents_of(x), g.right_descents_of(y));
            let edge = match kind {
                CellKind::Left => left,
                CellKind::Right => right,
                CellKind::TwoSided => left || right,
            };
            if edge {
                graph.add_edge(nodes[y], nodes[x], ());
            }
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut labels = vec![0usize; n];
    for (k, comp) in sccs.iter().enumerate() {
        for v in comp {
            labels[v.index()] = k;
        }
    }
    let mut part = CellPartition::from_labels(g, kind, &labels);

    // Reachability between classes.
    let m = part.len();
    let mut succ = vec![Vec::new(); m];
    for e in graph.raw_edges() {
        let a = part.class_of[e.source().index()];
        let b = part.class_of[e.target().index()];
        if a != b {
            succ[a].push(b);
        }
    }
    let mut reach = vec![vec![false; m]; m];
    for (start, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![start];
        row[start] = true;
        while let Some(c) = stack.pop() {
            for &d in &succ[c] {
                if !row[d] {
                    row[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    part.preorder = Some(reach);
    part
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn table(n: usize) -> KLTable {
        KLTable::new(Arc::new(CoxeterGroup::symmetric(n).unwrap()))
    }

    fn names(g: &CoxeterGroup, class: &[Element]) -> Vec<String> {
        let mut v: Vec<String> = class.iter().map(|&w| g.format_word(w.index())).collect();
        v.sort();
        v
    }

    #[test]
    fn s2_cells() {
        let kl = table(2);
        let cells = Cells::new(&kl);
        assert_eq!(cells.partition(CellKind::Left).len(), 2);
        let d = cells.duflo_involutions().unwrap();
        assert_eq!(d.duflo.len(), 2);
    }

    #[test]
    fn s3_left_cells_and_duflo() {
        let kl = table(3);
        let g = kl.group().clone();
        let cells = Cells::new(&kl);
        let mut left: Vec<Vec<String>> = cells
            .partition(CellKind::Left)
            .classes()
            .iter()
            .map(|c| names(&g, c))
            .collect();
        left.sort();
        assert_eq!(
            left,
            vec![
                vec!["e".to_string()],
                vec!["s1".into(), "s2s1".into()],
                vec!["s1s2".into(), "s2".into()],
                vec!["s1s2s1".into()],
            ]
        );
        let d = cells.duflo_involutions().unwrap();
        let got: Vec<String> = d.duflo.iter().map(|&w| g.format_word(w.index())).collect();
        assert_eq!(got, vec!["e", "s2", "s1", "s1s2s1"]);
        let a: Vec<u32> = d.duflo.iter().map(|&w| cells.a_function(w).unwrap()).collect();
        assert_eq!(a, vec![0, 1, 1, 3]);
    }

    #[test]
    fn s4_has_five_two_sided_cells_and_ten_duflo_involutions() {
        let kl = table(4);
        let g = kl.group().clone();
        let cells = Cells::new(&kl);
        assert_eq!(cells.partition(CellKind::TwoSided).len(), 5);
        assert_eq!(cells.partition(CellKind::Left).len(), 10);
        let d = cells.duflo_involutions().unwrap();
        let involutions: Vec<Element> = g.enumerate().filter(|&w| g.is_involution(w)).collect();
        assert_eq!(d.duflo, involutions);
    }

    #[test]
    fn inversion_exchanges_left_and_right() {
        let kl = table(4);
        let g = kl.group().clone();
        let cells = Cells::new(&kl);
        let (l, r) = (cells.partition(CellKind::Left), cells.partition(CellKind::Right));
        for x in g.enumerate() {
            for y in g.enumerate() {
                assert_eq!(r.same_cell(x, y), l.same_cell(g.inverse(x), g.inverse(y)));
            }
        }
    }

    #[test]
    fn a_is_constant_on_cells_and_grows_along_the_order() {
        let kl = table(4);
        let g = kl.group().clone();
        let cells = Cells::new(&kl);
        let j = cells.partition(CellKind::TwoSided);
        let a_of_class: Vec<u32> = j.classes().iter().map(|c| cells.a_function(c[0]).unwrap()).collect();
        for w in g.enumerate() {
            assert_eq!(cells.a_function(w).unwrap(), a_of_class[j.class_of(w)]);
        }
        for a in 0..j.len() {
            for b in 0..j.len() {
                if a != b && j.leq(a, b).unwrap() {
                    assert!(a_of_class[a] < a_of_class[b]);
                }
            }
        }
        assert_eq!(j.class_of(g.identity()), 0);
        for b in 0..j.len() {
            assert!(j.leq(0, b).unwrap());
        }
    }

    #[test]
    fn a_of_parabolic_longest_elements_is_their_length() {
        for ty in ["A3", "B3", "H3"] {
            let g = Arc::new(CoxeterGroup::new(crate::coxeter::CoxeterSystem::parse_type(ty).unwrap()).unwrap());
            let kl = KLTable::new(g.clone());
            let cells = Cells::new(&kl);
            let rank = g.rank();
            for mask in 0u64..(1 << rank) {
                // Longest element of the parabolic subgroup generated by `mask`.
                let w = g
                    .enumerate()
                    .filter(|&w| g.word(w).iter().all(|&s| mask >> s & 1 == 1))
                    .max_by_key(|&w| g.length(w))
                    .unwrap();
                assert_eq!(cells.a_function(w).unwrap() as usize, g.length(w), "{ty} {mask:b}");
            }
            cells.duflo_involutions().unwrap();
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("left".parse::<CellKind>().unwrap(), CellKind::Left);
        assert!("up".parse::<CellKind>().is_err());
    }
}
