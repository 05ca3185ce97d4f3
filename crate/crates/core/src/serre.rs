//! Serre functor as derived Nakayama, Calabi-Yau checks and homological
//! checkers on bundled algebras.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{coinvariant_type_a, AlgebraPresentation, Grading};
use crate::cells::{CellKind, Cells};
use crate::error::Error;
use crate::findimalg::{
    ext_from_complex, ext_table, is_isomorphic, minimal_resolution, resolve, BettiTable, Complex, ExtTable,
    GradedAlgebra, GradedModule, IsoResult,
};
use crate::hecke::KLTable;
use crate::linalg::Matrix;
use crate::shifts::CYShift;

/// `S(M)`: the Nakayama functor applied to a minimal projective resolution.
pub fn serre_of(m: &GradedModule, max_len: usize) -> Result<Complex, Error> {
    serre_of_complex(&Complex::from_module(m), max_len)
}

pub fn serre_of_complex(x: &Complex, max_len: usize) -> Result<Complex, Error> {
    let p = resolve(x, max_len);
    p.require_complete()?;
    Ok(p.nakayama())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CYStatus {
    /// `S(M) ≅ M⟨grade_shift⟩[hom_shift]`.
    CY { hom_shift: i64, grade_shift: i64, witness: Matrix },
    NotCY { support: Vec<i32>, reason: String },
    /// Homology concentrated in one degree but isomorphism undecided.
    Undecided { hom_shift: i64, grade_shift: i64 },
    Truncated { max_len: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CYReport {
    pub name: String,
    pub status: CYStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<CYShift>,
}

impl CYReport {
    pub fn shift(&self) -> Option<CYShift> {
        match self.status {
            CYStatus::CY { hom_shift, grade_shift, .. } => Some(CYShift { hom_shift, grade_shift }),
            _ => None,
        }
    }

    pub fn is_cy(&self) -> bool {
        self.shift().is_some()
    }

    /// CY with the expected shift, or CY at all when nothing was expected.
    pub fn passed(&self) -> bool {
        match (self.shift(), self.expected) {
            (Some(s), Some(e)) => s == e,
            (Some(_), None) => true,
            _ => false,
        }
    }

    pub fn summary(&self) -> String {
        match &self.status {
            CYStatus::CY { hom_shift, grade_shift, .. } => format!("CY hom={hom_shift} grade={grade_shift}"),
            CYStatus::NotCY { support, reason } => format!("not CY: {reason}, degrees {support:?}"),
            CYStatus::Undecided { hom_shift, grade_shift } => {
                format!("undecided at hom={hom_shift} grade={grade_shift}")
            }
            CYStatus::Truncated { max_len } => format!("resolution truncated at {max_len}"),
        }
    }
}

pub fn cy_check(name: &str, m: &GradedModule, expected: Option<CYShift>, max_len: usize) -> Result<CYReport, Error> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    let report = |status| CYReport { name: name.to_string(), status, expected };
    let s = match serre_of(m, max_len) {
        Ok(s) => s,
        Err(Error::Truncated { max_len }) => return Ok(report(CYStatus::Truncated { max_len })),
        Err(e) => return Err(e),
    };
    let support = s.homology_support();
    if support.len() != 1 {
        let reason = "homology not concentrated in one degree".to_string();
        return Ok(report(CYStatus::NotCY { support, reason }));
    }
    let h = s.homology(support[0]);
    let hom_shift = -support[0] as i64;
    let g = m.min_degree().unwrap() - h.min_degree().unwrap();
    let status = match is_isomorphic(&h, &m.shift(g))? {
        IsoResult::Isomorphic(witness) => CYStatus::CY { hom_shift, grade_shift: g as i64, witness },
        IsoResult::NotIsomorphic(why) => {
            CYStatus::NotCY { support, reason: format!("homology is not a shift of the module ({why:?})") }
        }
        IsoResult::Inconclusive => CYStatus::Undecided { hom_shift, grade_shift: g as i64 },
    };
    Ok(report(status))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CYClass {
    /// Candidates isomorphic to one another up to a grading shift.
    pub members: Vec<String>,
    pub report: CYReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CYClassification {
    pub classes: Vec<CYClass>,
    /// CY dimension → representatives
    pub by_dimension: BTreeMap<i64, Vec<String>>,
    pub not_cy: Vec<String>,
}

/// Groups candidates up to isomorphism and grading shift, then checks one
/// representative per group.
pub fn classify_cy(candidates: &[(String, GradedModule)], max_len: usize) -> Result<CYClassification, Error> {
    let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, (name, m)) in candidates.iter().enumerate() {
        let mut placed = false;
        for (rep, members) in groups.iter_mut() {
            let r = &candidates[*rep].1;
            if r.dim() != m.dim() || r.is_zero() {
                continue;
            }
            let k = r.min_degree().unwrap() - m.min_degree().unwrap();
            if is_isomorphic(m, &r.shift(k))?.is_iso() {
                members.push(name.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push((i, vec![name.clone()]));
        }
    }
    let mut out = CYClassification { classes: Vec::new(), by_dimension: BTreeMap::new(), not_cy: Vec::new() };
    for (rep, members) in groups {
        let (name, m) = &candidates[rep];
        let report = cy_check(name, m, None, max_len)?;
        match report.shift() {
            Some(s) => out.by_dimension.entry(s.hom_shift).or_default().push(name.clone()),
            None => out.not_cy.push(name.clone()),
        }
        out.classes.push(CYClass { members, report });
    }
    Ok(out)
}

/// The indecomposables of the sl₂ block up to grading shift, under their
/// structural names.
pub fn sl2_candidates(alg: &Arc<GradedAlgebra>) -> Result<Vec<(String, GradedModule)>, Error> {
    let s = alg.vertex("s")?;
    let e = alg.vertex("e")?;
    Ok(vec![
        ("L_s".into(), GradedModule::simple(alg, s)),
        ("L_e".into(), GradedModule::simple(alg, e)),
        ("P_s".into(), GradedModule::projective(alg, s)),
        ("P_e".into(), GradedModule::projective(alg, e)),
        ("I_s".into(), GradedModule::injective(alg, s)),
        ("I_e".into(), GradedModule::injective(alg, e)),
        ("T_e".into(), GradedModule::projective(alg, s).shift(1)),
    ])
}

pub fn projective_dimension(m: &GradedModule, max_len: usize) -> Result<usize, Error> {
    Ok(minimal_resolution(m, max_len).require_complete()?.length())
}

/// Computed over the opposite algebra through graded duality.
pub fn injective_dimension(m: &GradedModule, max_len: usize) -> Result<usize, Error> {
    projective_dimension(&m.dual(), max_len)
}

/// Maximum projective dimension of the simples.
pub fn global_dimension(alg: &Arc<GradedAlgebra>, max_len: usize) -> Result<usize, Error> {
    let mut best = 0;
    for v in 0..alg.num_vertices() {
        best = best.max(projective_dimension(&GradedModule::simple(alg, v), max_len)?);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuslanderTerm {
    pub position: usize,
    /// `(vertex, shift)` of the injective summands `I_v⟨shift⟩`.
    pub injectives: Vec<(String, i32)>,
    pub projective_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuslanderReport {
    pub algebra: String,
    pub terms: Vec<AuslanderTerm>,
    pub injective_dimensions: BTreeMap<String, usize>,
    pub holds: bool,
}

/// Minimal injective coresolution `A → Q₀ → Q₁ → …` of the regular module
/// and the bound `pd Q_i ≤ i`. Requires finite global dimension.
pub fn auslander_check(alg: &Arc<GradedAlgebra>, max_len: usize) -> Result<AuslanderReport, Error> {
    global_dimension(alg, max_len)?;
    let mut pd_inj = Vec::new();
    for v in 0..alg.num_vertices() {
        pd_inj.push(projective_dimension(&GradedModule::injective(alg, v), max_len)?);
    }
    let mut by_pos: BTreeMap<usize, Vec<(String, i32)>> = BTreeMap::new();
    let mut inj_dims = BTreeMap::new();
    for v in 0..alg.num_vertices() {
        let dual = GradedModule::projective(alg, v).dual();
        let res = minimal_resolution(&dual, max_len);
        res.require_complete()?;
        inj_dims.insert(alg.vertices()[v].clone(), res.length());
        for (&n, sum) in res.terms() {
            let row = by_pos.entry((-n) as usize).or_default();
            row.extend(sum.iter().map(|p| (alg.vertices()[p.vertex].clone(), -p.shift)));
        }
    }
    let mut terms = Vec::new();
    let mut holds = true;
    for (position, mut injectives) in by_pos {
        injectives.sort();
        let pd = injectives
            .iter()
            .map(|(v, _)| pd_inj[alg.vertex(v).expect("vertex name")])
            .max()
            .unwrap_or(0);
        holds &= pd <= position;
        terms.push(AuslanderTerm { position, injectives, projective_dimension: pd });
    }
    Ok(AuslanderReport { algebra: alg.name().to_string(), terms, injective_dimensions: inj_dims, holds })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtVanishingEntry {
    pub x: String,
    pub y: String,
    /// `(i, j) → dim ext^i(I_x, L_y⟨j⟩)`
    pub table: ExtTable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtVanishingReport {
    pub entries: Vec<ExtVanishingEntry>,
    /// `x → ext^{2a(w₀x)}(I_x, L_x⟨2(a(x) − a(w₀x))⟩)`
    pub top_dims: BTreeMap<String, usize>,
    pub violations: Vec<String>,
}

impl ExtVanishingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.top_dims.values().all(|&d| d == 1)
    }
}

/// Checks the vanishing pattern of `ext^i(I_x, L_y⟨j⟩)` against left cells
/// and a-values: nonzero only for `i ≤ 2a(w₀x)` and `y ≥_L x`; for
/// `y ~_L x` nothing below `2a(w₀x)`; at `i = 2a(w₀x)` only `y = x`
/// survives, once, in grading `2(a(x) − a(w₀x))`.
pub fn ext_vanishing_check(pres: &AlgebraPresentation, max_len: usize) -> Result<ExtVanishingReport, Error> {
    let md = pres.metadata()?;
    let alg = pres.algebra()?;
    let g = Arc::new(md.group()?);
    let kl = KLTable::new(g.clone());
    let cells = Cells::new(&kl);
    let left = cells.partition(CellKind::Left);
    let nv = alg.num_vertices();
    let labels: Vec<_> = alg.vertices().iter().map(|v| md.label_of(&g, v)).collect::<Result<_, _>>()?;
    let mut report = ExtVanishingReport { entries: Vec::new(), top_dims: BTreeMap::new(), violations: Vec::new() };
    for x in 0..nv {
        let lx = labels[x];
        let top = 2 * cells.a_function(g.w0_mult(lx))? as i32;
        let grade = 2 * (cells.a_function(lx)? as i32 - cells.a_function(g.w0_mult(lx))? as i32);
        let ix = GradedModule::injective(&alg, x);
        let res = minimal_resolution(&ix, max_len);
        res.require_complete()?;
        let ms: Vec<i32> = (0..=res.length() as i32 + 1).collect();
        for y in 0..nv {
            let ly = labels[y];
            let cx = left.class_of(lx);
            let cy = left.class_of(ly);
            let above = left.leq(cx, cy).ok_or(Error::Unknown("cell order unavailable".into()))?;
            let same = cx == cy;
            let table = ext_from_complex(&res, &GradedModule::simple(&alg, y), &ms)?;
            let (xn, yn) = (&alg.vertices()[x], &alg.vertices()[y]);
            for (&(i, j), &d) in &table {
                if d == 0 {
                    continue;
                }
                let mut bad = Vec::new();
                if i > top || !above {
                    bad.push("a");
                }
                if same && i < top {
                    bad.push("b");
                }
                if same && x != y && i == top {
                    bad.push("c");
                }
                if above && !same && i == top {
                    bad.push("e");
                }
                if x == y && i == top && j != grade {
                    bad.push("d");
                }
                for clause in bad {
                    report.violations.push(format!("({clause}) ext^{i}(I_{xn}, L_{yn}<{j}>) = {d}"));
                }
            }
            if x == y {
                report.top_dims.insert(xn.clone(), table.get(&(top, grade)).copied().unwrap_or(0));
            }
            report.entries.push(ExtVanishingEntry { x: xn.clone(), y: yn.clone(), table });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub k: usize,
    pub max_m: i32,
    /// `(m, i) → dim ext^m(S^k Δ_e, Δ_e⟨i⟩)`
    pub serre_side: ExtTable,
    /// the same positions read off the coinvariant algebra
    pub coinvariant_side: ExtTable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    pub fn sides_agree(&self) -> bool {
        self.rows.iter().all(|r| r.serre_side == r.coinvariant_side)
    }

    /// Tables for `k ≥ 1` coincide after moving `i` to `i − 2kℓ(w₀)`, on
    /// their common range of `m`.
    pub fn stable(&self, length_w0: i32) -> bool {
        let rows: Vec<&StabilityRow> = self.rows.iter().filter(|r| r.k >= 1).collect();
        let norm = |r: &StabilityRow, cap: i32| -> ExtTable {
            r.serre_side
                .iter()
                .filter(|((m, _), _)| *m <= cap)
                .map(|(&(m, i), &d)| ((m, i - 2 * r.k as i32 * length_w0), d))
                .collect()
        };
        rows.windows(2).all(|w| {
            let cap = w[0].max_m.min(w[1].max_m);
            norm(w[0], cap) == norm(w[1], cap)
        })
    }
}

/// `ext^m(S^kΔ_e, Δ_e⟨i⟩)` against `ext^m_C(C, C⟨i/2 − kℓ(w₀)⟩)` on the
/// sl₂ block, for `m ≤ k` (`k = 0`) and `m ≤ k + 1` otherwise. The
/// coinvariant algebra is taken with generators in degree 2, which turns
/// `i/2 − kℓ(w₀)` into `i − 2kℓ(w₀)`.
pub fn stability_check_sl2(pres: &AlgebraPresentation, k_max: usize, max_len: usize) -> Result<StabilityReport, Error> {
    let alg = pres.algebra()?;
    let e = alg.vertex("e")?;
    let delta = GradedModule::projective(&alg, e);
    let length_w0 = 1;
    let c = coinvariant_type_a(2, Grading::CategoryO)?.algebra()?;
    let k_c = GradedModule::simple(&c, 0);
    let mut x = Complex::from_module(&delta);
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let max_m = if k == 0 { 0 } else { k as i32 + 1 };
        let p = resolve(&x, max_len);
        p.require_complete()?;
        let ms: Vec<i32> = (0..=max_m).collect();
        let serre_side = ext_from_complex(&p, &delta, &ms)?;
        let coinvariant_side = ext_table(&k_c, &k_c, max_m as usize)?
            .into_iter()
            .filter(|((m, _), _)| *m <= max_m)
            .map(|((m, j), d)| ((m, j + 2 * k as i32 * length_w0), d))
            .collect();
        rows.push(StabilityRow { k, max_m, serre_side, coinvariant_side });
        x = p.nakayama();
    }
    Ok(StabilityReport { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionVectors {
    /// `V` applied to `I_{w₀}`
    pub v: Vec<u64>,
    /// `V` applied to `I_{w₀d}⟨1⟩`
    pub w: Vec<u64>,
    /// degrees where `v ≤ w` fails
    pub failing_degrees: Vec<usize>,
    /// highest degree where `w − v` is nonzero
    pub top_difference: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParabolicReport {
    pub algebra: String,
    pub cases: Vec<CYReport>,
    /// minimal resolution of the injective at the vertex labelled `e`
    pub injective_resolution: BettiTable,
    pub global_dimension: Option<usize>,
    pub vectors: Option<DimensionVectors>,
}

impl ParabolicReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CYReport::passed)
    }
}

/// Serre-functor checks for a parabolic or cell subcategory with
/// distinguished Duflo element `d`. Projective-injectives are expected to
/// be CY with shift `(0, 2a(d))`; simples recorded as CY with label `e`
/// get `(2(a(w₀) − a(w₀d)), −2(a(w₀) − a(w₀d)))`.
pub fn parabolic_serre_check(pres: &AlgebraPresentation, max_len: usize) -> Result<ParabolicReport, Error> {
    let md = pres.metadata()?;
    let alg = pres.algebra()?;
    let g = Arc::new(md.group()?);
    let d_name = md.distinguished.as_ref().ok_or_else(|| Error::Parse("no distinguished Duflo element".into()))?;
    let d = g.parse(d_name)?;
    let need = |w| -> Result<i64, Error> {
        md.a_of(&g, w)?
            .map(|a| a as i64)
            .ok_or_else(|| Error::Parse(format!("a-value of {} missing", g.format(w))))
    };
    let expected = |dp| -> Result<CYShift, Error> {
        let (a_dp, a_w0dp, a_w0d) = (need(dp)?, need(g.w0_mult(dp))?, need(g.w0_mult(d))?);
        Ok(CYShift { hom_shift: 2 * (a_w0dp - a_w0d), grade_shift: 2 * (a_dp - a_w0dp + a_w0d) })
    };
    let mut cases = Vec::new();
    for v in &md.projective_injective {
        let m = GradedModule::projective(&alg, alg.vertex(v)?);
        cases.push(cy_check(&format!("P_{v}"), &m, Some(expected(d)?), max_len)?);
    }
    let e_vertex = alg
        .vertices()
        .iter()
        .position(|v| md.label_of(&g, v).map(|w| w == g.identity()).unwrap_or(false))
        .ok_or_else(|| Error::Parse("no vertex labelled e".into()))?;
    for v in &md.cy_simples {
        let m = GradedModule::simple(&alg, alg.vertex(v)?);
        let dp = md.label_of(&g, v)?;
        cases.push(cy_check(&format!("L_{v}"), &m, Some(expected(dp)?), max_len)?);
    }
    let inj = minimal_resolution(&GradedModule::injective(&alg, e_vertex), max_len);
    let vectors = if g.type_a_degree().is_some() {
        let kl = KLTable::new(g.clone());
        let v = kl.graded_injective_dim_vector(g.longest_element())?;
        let w = kl.graded_injective_dim_vector(g.w0_mult(d))?;
        let failing_degrees = (0..v.len()).filter(|&i| v[i] > w[i]).collect();
        let top_difference = (0..v.len()).rev().find(|&i| v[i] != w[i]);
        Some(DimensionVectors { v, w, failing_degrees, top_difference })
    } else {
        None
    };
    Ok(ParabolicReport {
        algebra: alg.name().to_string(),
        cases,
        injective_resolution: inj.betti_table(),
        global_dimension: global_dimension(&alg, max_len).ok(),
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dual_numbers, parabolic_an, sl2_block};
    use crate::findimalg::DEFAULT_MAX_LEN;

    fn sl2() -> Arc<GradedAlgebra> {
        sl2_block().algebra().unwrap()
    }

    #[test]
    fn serre_of_projective_is_injective() {
        for p in [sl2_block(), parabolic_an(3).unwrap(), crate::catalog::cell_subcategory_sl4()] {
            let a = p.algebra().unwrap();
            for v in 0..a.num_vertices() {
                let s = serre_of(&GradedModule::projective(&a, v), DEFAULT_MAX_LEN).unwrap();
                assert_eq!(s.homology_support(), vec![0]);
                let i = GradedModule::injective(&a, v);
                assert!(is_isomorphic(&s.homology(0), &i).unwrap().is_iso());
            }
        }
    }

    #[test]
    fn sl2_theorem_a_shifts() {
        let a = sl2();
        let ps = GradedModule::projective(&a, 0);
        let le = GradedModule::simple(&a, 1);
        let r = cy_check("P_s", &ps, Some(CYShift { hom_shift: 0, grade_shift: 2 }), 40).unwrap();
        assert!(r.passed(), "{}", r.summary());
        let r = cy_check("L_e", &le, Some(CYShift { hom_shift: 2, grade_shift: -2 }), 40).unwrap();
        assert!(r.passed(), "{}", r.summary());
        let ls = GradedModule::simple(&a, 0);
        let r = cy_check("L_s", &ls, None, 40).unwrap();
        match r.status {
            CYStatus::NotCY { support, .. } => assert!(support.len() >= 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn delta_goes_to_nabla() {
        let a = sl2();
        let s = serre_of(&GradedModule::projective(&a, 1), 40).unwrap();
        assert_eq!(s.homology_support(), vec![0]);
        assert!(is_isomorphic(&s.homology(0), &GradedModule::injective(&a, 1)).unwrap().is_iso());
    }

    #[test]
    fn additivity_and_mixed_sums() {
        let a = sl2();
        let ps = GradedModule::projective(&a, 0);
        let le = GradedModule::simple(&a, 1);
        let pp = GradedModule::direct_sum(&a, &[&ps, &ps]).unwrap();
        assert_eq!(cy_check("", &pp, None, 40).unwrap().shift(), cy_check("", &ps, None, 40).unwrap().shift());
        let mixed = GradedModule::direct_sum(&a, &[&ps, &le]).unwrap();
        assert!(!cy_check("", &mixed, None, 40).unwrap().is_cy());
    }

    #[test]
    fn euler_characteristic_is_preserved() {
        let a = sl2();
        for m in sl2_candidates(&a).unwrap() {
            let s = serre_of(&m.1, 40).unwrap();
            let mut ungraded = vec![0i64; a.num_vertices()];
            for ((v, _), c) in s.euler_characteristic() {
                ungraded[v] += c;
            }
            let want: Vec<i64> = m.1.composition_multiplicities().iter().map(|&x| x as i64).collect();
            assert_eq!(ungraded, want, "{}", m.0);
        }
    }

    #[test]
    fn sl2_classification() {
        let a = sl2();
        let c = classify_cy(&sl2_candidates(&a).unwrap(), 40).unwrap();
        assert_eq!(c.by_dimension, BTreeMap::from([(0, vec!["P_s".to_string()]), (2, vec!["L_e".to_string()])]));
        let ps_class = c.classes.iter().find(|k| k.members[0] == "P_s").unwrap();
        assert_eq!(ps_class.members, ["P_s", "I_s", "T_e"]);
    }

    #[test]
    fn dual_numbers_truncate() {
        let a = dual_numbers().algebra().unwrap();
        assert_eq!(auslander_check(&a, 8).unwrap_err(), Error::Truncated { max_len: 8 });
        let r = cy_check("k", &GradedModule::simple(&a, 0), None, 8).unwrap();
        assert_eq!(r.status, CYStatus::Truncated { max_len: 8 });
    }

    #[test]
    fn sl2_auslander() {
        let a = sl2();
        let r = auslander_check(&a, 40).unwrap();
        assert!(r.holds);
        assert_eq!(r.injective_dimensions, BTreeMap::from([("e".to_string(), 2), ("s".to_string(), 0)]));
        assert_eq!(global_dimension(&a, 40).unwrap(), 2);
    }

    #[test]
    fn sl2_cells_order_has_e_at_the_bottom() {
        let g = Arc::new(sl2_block().metadata().unwrap().group().unwrap());
        let kl = KLTable::new(g.clone());
        let cells = Cells::new(&kl);
        let left = cells.partition(CellKind::Left);
        let (ce, cs) = (left.class_of(g.identity()), left.class_of(g.generator(0)));
        assert_eq!(left.leq(ce, cs), Some(true));
        assert_eq!(left.leq(cs, ce), Some(false));
    }

    #[test]
    fn sl2_ext_vanishing() {
        let r = ext_vanishing_check(&sl2_block(), 40).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        let ee = r.entries.iter().find(|x| x.x == "e" && x.y == "e").unwrap();
        assert_eq!(ee.table.get(&(2, -2)), Some(&1));
    }

    #[test]
    fn sl2_stability() {
        let r = stability_check_sl2(&sl2_block(), 3, 40).unwrap();
        assert!(r.sides_agree(), "{r:?}");
        assert!(r.stable(1));
        for row in &r.rows {
            for (&(m, i), &d) in &row.serre_side {
                assert_eq!((d, i), (1, 2 * (row.k as i32 - m)));
            }
        }
    }

    #[test]
    fn metadata_a_values_match_cells() {
        for p in [sl2_block(), parabolic_an(4).unwrap(), crate::catalog::cell_subcategory_sl4()] {
            let md = p.metadata().unwrap();
            let g = Arc::new(md.group().unwrap());
            let kl = KLTable::new(g.clone());
            let cells = Cells::new(&kl);
            for (w, &a) in &md.a_values {
                assert_eq!(cells.a_function(g.parse(w).unwrap()).unwrap(), a, "{w}");
            }
            let duflo = cells.duflo_involutions().unwrap().duflo;
            for w in &md.duflo {
                assert!(duflo.contains(&g.parse(w).unwrap()));
            }
        }
    }

    #[test]
    fn parabolic_three() {
        let r = parabolic_serre_check(&parabolic_an(3).unwrap(), 40).unwrap();
        assert!(r.passed(), "{:?}", r.cases.iter().map(CYReport::summary).collect::<Vec<_>>());
        assert_eq!(r.cases.len(), 3);
    }
}
