//! Fixture suites run by `klcy verify`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::{self, AlgebraPresentation, Grading};
use crate::cells::{compute_cells, CellKind, Cells};
use crate::coxeter::CoxeterGroup;
use crate::error::Error;
use crate::findimalg::{ext_table, minimal_resolution, BettiTable, ExtTable, GradedModule, DEFAULT_MAX_LEN};
use crate::hecke::{KLTable, CALIBRATION_S4_W0};
use crate::laurent::LaurentPoly;
use crate::oracle;
use crate::serre::{self, CYReport};
use crate::shifts::{figure1_coordinates, hom_collisions, shift_of, shift_of_shape, CYShift};
use crate::typea::{self, shape_a, Partition};

pub const SUITES: [&str; 11] =
    ["kl", "cells", "afun", "shifts", "resolutions", "thmA", "auslander", "cor58", "coinvariant", "prop64", "parabolic"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn eq_check<T: PartialEq + std::fmt::Debug>(name: &str, got: T, want: T) -> Check {
    let passed = got == want;
    let detail = if passed { format!("{got:?}") } else { format!("got {got:?}, expected {want:?}") };
    check(name, passed, detail)
}

fn group(n: usize) -> Result<Arc<CoxeterGroup>, Error> {
    Ok(Arc::new(CoxeterGroup::symmetric(n)?))
}

/// Runs one suite by name, or every suite for `all`. `algebra` restricts
/// the algebra-based suites to one presentation.
pub fn run(suite: &str, algebra: Option<&AlgebraPresentation>) -> Result<Vec<SuiteReport>, Error> {
    if suite == "all" {
        return SUITES.iter().map(|s| run_one(s, algebra)).collect();
    }
    Ok(vec![run_one(suite, algebra)?])
}

fn run_one(suite: &str, algebra: Option<&AlgebraPresentation>) -> Result<SuiteReport, Error> {
    let start = Instant::now();
    let checks = match suite {
        "kl" => kl_suite()?,
        "cells" => cells_suite()?,
        "afun" => afun_suite()?,
        "shifts" => shifts_suite()?,
        "resolutions" => resolutions_suite()?,
        "thmA" => cy_suite(algebra)?,
        "auslander" => auslander_suite(algebra)?,
        "cor58" => ext_vanishing_suite(algebra)?,
        "coinvariant" => coinvariant_suite()?,
        "prop64" => stability_suite()?,
        "parabolic" => parabolic_suite(algebra)?,
        other => {
            return Err(Error::Parse(format!("unknown suite `{other}`; expected one of {} or all", SUITES.join(", "))))
        }
    };
    Ok(SuiteReport { suite: suite.into(), checks, millis: start.elapsed().as_millis() })
}

fn kl_suite() -> Result<Vec<Check>, Error> {
    let g = group(4)?;
    let kl = KLTable::new(g.clone());
    let oracle = oracle::kl_by_bar_solve(&g);
    let mut mismatches = 0;
    for x in g.enumerate() {
        for y in g.enumerate() {
            if kl.kl_poly(x, y)? != oracle[x.index()][y.index()] {
                mismatches += 1;
            }
        }
    }
    let pairs = g.len() * g.len();
    let h = kl.kl_poly(g.parse("s2")?, g.parse("s2s1s3s2")?)?;
    let w0s = g.w0_mult(g.parse("s2")?);
    Ok(vec![
        check("S4 recursion equals bar-invariance solve", mismatches == 0, format!("{pairs} pairs, {mismatches} mismatches")),
        eq_check("h(s2, s2s1s3s2)", h, LaurentPoly::from_terms([(1, 1), (3, 1)])),
        eq_check("h(e, w0 s2)(1)", kl.kl_poly(g.identity(), w0s)?.eval_at_one(), 2.into()),
    ])
}

fn cells_suite() -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    for n in [4, 5] {
        let g = group(n)?;
        let kl = KLTable::new(g.clone());
        for kind in [CellKind::Left, CellKind::Right, CellKind::TwoSided] {
            let mu = compute_cells(&kl, kind);
            let rs = typea::cells_via_rs(&g, kind)?;
            out.push(check(&format!("S{n} {kind:?} cells equal RS cells"), mu.same_partition(&rs), format!("{} cells", mu.len())));
        }
        let cells = Cells::new(&kl);
        let duflo: BTreeSet<_> = cells.duflo_involutions()?.duflo.into_iter().collect();
        let inv: BTreeSet<_> = g.enumerate().filter(|&w| g.is_involution(w)).collect();
        out.push(check(&format!("S{n} Duflo set is the involutions"), duflo == inv, format!("{} involutions", inv.len())));
    }
    let g = group(3)?;
    let kl = KLTable::new(g.clone());
    let cells = Cells::new(&kl);
    let duflo: BTreeSet<String> = cells.duflo_involutions()?.duflo.iter().map(|&w| g.format_word(w.index())).collect();
    let want: BTreeSet<String> = ["e", "s1", "s2", "s1s2s1"].iter().map(|s| s.to_string()).collect();
    out.push(eq_check("S3 Duflo set", duflo, want));
    let a: Vec<u32> =
        ["e", "s1", "s2", "s1s2s1"].iter().map(|w| cells.a_function(g.parse(w)?)).collect::<Result<_, _>>()?;
    out.push(eq_check("S3 a-values of e, s, t, w0", a, vec![0, 1, 1, 3]));
    Ok(out)
}

pub const S7_A_TABLE: [(&str, usize); 15] = [
    ("7", 0),
    ("6,1", 1),
    ("5,2", 2),
    ("5,1,1", 3),
    ("4,3", 3),
    ("4,2,1", 4),
    ("4,1^3", 6),
    ("3,3,1", 5),
    ("3,2,2", 6),
    ("3,2,1,1", 7),
    ("3,1^4", 10),
    ("2,2,2,1", 9),
    ("2,2,1^3", 11),
    ("2,1^5", 15),
    ("1^7", 21),
];

fn afun_suite() -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    for n in [4, 5] {
        let g = group(n)?;
        let kl = KLTable::new(g.clone());
        let cells = Cells::new(&kl);
        let mut bad = 0;
        for w in g.enumerate() {
            if cells.a_function(w)? as usize != shape_a(&typea::shape_of(&g, w)?) {
                bad += 1;
            }
        }
        out.push(check(&format!("S{n} a-function equals n(λ)"), bad == 0, format!("{} elements, {bad} mismatches", g.len())));
    }
    let start = Instant::now();
    let mut bad = Vec::new();
    for (s, a) in S7_A_TABLE {
        let lambda: Partition = s.parse()?;
        if shape_a(&lambda) != a {
            bad.push(s);
        }
    }
    let ms = start.elapsed().as_millis();
    out.push(check("S7 a-values by shape", bad.is_empty() && ms < 1000, format!("15 values, mismatches {bad:?}, {ms} ms")));
    Ok(out)
}

fn shifts_suite() -> Result<Vec<Check>, Error> {
    let g = group(2)?;
    let kl = KLTable::new(g.clone());
    let cells = Cells::new(&kl);
    let x = shift_of_shape(&"5,1,1".parse()?);
    let y = shift_of_shape(&"4,3".parse()?);
    let dots = figure1_coordinates(7);
    let collisions = hom_collisions(&dots);
    Ok(vec![
        eq_check("sl2 d=e", shift_of(&cells, g.identity())?, CYShift { hom_shift: 2, grade_shift: -2 }),
        eq_check("sl2 d=s", shift_of(&cells, g.generator(0))?, CYShift { hom_shift: 0, grade_shift: 2 }),
        eq_check("S7 (5,1,1) vs (4,3) hom shifts", (x.hom_shift, y.hom_shift), (20, 18)),
        eq_check("figure1(7) dots and collisions", (dots.len(), collisions.len()), (15, 2)),
    ])
}

/// The minimal resolution of `I_n` over the parabolic algebra: linear from
/// `P_{n−1}⟨1⟩` down to `P_1⟨3−n⟩`, one step of size 2, then linear again
/// up to `P_n⟨2−2n⟩` in homological position `2n−2`.
pub fn parabolic_injective_betti(n: usize) -> BettiTable {
    let n = n as i32;
    let mut t = BettiTable::new();
    for k in 0..=2 * n - 2 {
        let (v, s) = if k <= n - 2 { (n - 1 - k, 1 - k) } else { (k - n + 2, -k) };
        t.insert(k, vec![(v.to_string(), s)]);
    }
    t
}

pub fn sl4_cell_injective_betti() -> BettiTable {
    BettiTable::from([
        (0, vec![("s".into(), 1)]),
        (1, vec![("sr".into(), 0), ("st".into(), 0)]),
        (2, vec![("s".into(), -1)]),
        (3, vec![("e".into(), -2)]),
    ])
}

fn resolutions_suite() -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    let sl2 = catalog::sl2_block();
    let a = sl2.algebra()?;
    let e = a.vertex("e")?;
    let nabla = GradedModule::injective(&a, e);
    let res = minimal_resolution(&nabla, DEFAULT_MAX_LEN);
    out.push(eq_check(
        "sl2 nabla_e",
        res.betti_table(),
        BettiTable::from([(0, vec![("s".into(), 1)]), (1, vec![("s".into(), -1)]), (2, vec![("e".into(), -2)])]),
    ));
    out.push(eq_check(
        "sl2 ext(nabla_e, delta_e)",
        ext_table(&nabla, &GradedModule::projective(&a, e), 3)?,
        ExtTable::from([((0, 2), 1), ((1, 0), 1), ((2, -2), 1)]),
    ));
    for n in 3..=5 {
        let p = catalog::parabolic_an(n)?;
        let a = p.algebra()?;
        let res = minimal_resolution(&GradedModule::injective(&a, n - 1), DEFAULT_MAX_LEN);
        out.push(eq_check(&format!("parabolic{n} I_{n}"), res.betti_table(), parabolic_injective_betti(n)));
    }
    let p = catalog::cell_subcategory_sl4();
    let a = p.algebra()?;
    let res = minimal_resolution(&GradedModule::injective(&a, a.vertex("e")?), DEFAULT_MAX_LEN);
    out.push(eq_check("sl4_cell I_e", res.betti_table(), sl4_cell_injective_betti()));
    Ok(out)
}

fn cy_line(r: &CYReport) -> Check {
    let want = r.expected.map(|s| format!(" (expected hom={} grade={})", s.hom_shift, s.grade_shift)).unwrap_or_default();
    check(&r.name, r.passed(), format!("{}{want}", r.summary()))
}

fn presentations(algebra: Option<&AlgebraPresentation>, defaults: Vec<AlgebraPresentation>) -> Vec<AlgebraPresentation> {
    match algebra {
        Some(p) => vec![p.clone()],
        None => defaults,
    }
}

fn parabolic_defaults() -> Result<Vec<AlgebraPresentation>, Error> {
    (3..=5).map(catalog::parabolic_an).collect()
}

fn sl2_cy_checks(p: &AlgebraPresentation) -> Result<Vec<Check>, Error> {
    let a = p.algebra()?;
    let g = Arc::new(p.metadata()?.group()?);
    let kl = KLTable::new(g.clone());
    let cells = Cells::new(&kl);
    let mut out = Vec::new();
    let ps = GradedModule::projective(&a, a.vertex("s")?);
    let le = GradedModule::simple(&a, a.vertex("e")?);
    let r = serre::cy_check("sl2 P_s", &ps, Some(shift_of(&cells, g.generator(0))?), DEFAULT_MAX_LEN)?;
    out.push(cy_line(&r));
    let r = serre::cy_check("sl2 L_e", &le, Some(shift_of(&cells, g.identity())?), DEFAULT_MAX_LEN)?;
    out.push(cy_line(&r));
    let c = serre::classify_cy(&serre::sl2_candidates(&a)?, DEFAULT_MAX_LEN)?;
    let want = BTreeMap::from([(0, vec!["P_s".to_string()]), (2, vec!["L_e".to_string()])]);
    out.push(eq_check("sl2 CY classification", c.by_dimension, want));
    Ok(out)
}

fn cy_suite(algebra: Option<&AlgebraPresentation>) -> Result<Vec<Check>, Error> {
    let mut defaults = vec![catalog::sl2_block()];
    defaults.extend(parabolic_defaults()?);
    let mut out = Vec::new();
    for p in presentations(algebra, defaults) {
        if p.metadata()?.distinguished.is_some() {
            let r = serre::parabolic_serre_check(&p, DEFAULT_MAX_LEN)?;
            out.extend(r.cases.iter().map(|c| {
                let mut line = cy_line(c);
                line.name = format!("{} {}", p.name, line.name);
                line
            }));
        } else {
            out.extend(sl2_cy_checks(&p)?);
        }
    }
    Ok(out)
}

fn auslander_suite(algebra: Option<&AlgebraPresentation>) -> Result<Vec<Check>, Error> {
    let defaults = vec![catalog::sl2_block(), catalog::parabolic_an(3)?];
    let mut out = Vec::new();
    for p in presentations(algebra, defaults) {
        let a = p.algebra()?;
        match serre::auslander_check(&a, DEFAULT_MAX_LEN) {
            Ok(r) => {
                let bounds: Vec<String> =
                    r.terms.iter().map(|t| format!("pd Q{}={}", t.position, t.projective_dimension)).collect();
                out.push(check(&format!("{} Auslander bound", p.name), r.holds, bounds.join(", ")));
                out.push(check(
                    &format!("{} injective dimensions", p.name),
                    true,
                    format!("{:?}", r.injective_dimensions),
                ));
                if p.name == "sl2" {
                    let want = BTreeMap::from([("e".to_string(), 2), ("s".to_string(), 0)]);
                    out.push(eq_check("sl2 inj-dim P_e, P_s", r.injective_dimensions, want));
                }
            }
            Err(Error::Truncated { max_len }) => {
                out.push(check(&format!("{} Auslander bound", p.name), false, format!("global dimension not reached within {max_len}")))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn ext_vanishing_suite(algebra: Option<&AlgebraPresentation>) -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    for p in presentations(algebra, vec![catalog::sl2_block()]) {
        let r = serre::ext_vanishing_check(&p, DEFAULT_MAX_LEN)?;
        out.push(check(&format!("{} vanishing pattern", p.name), r.violations.is_empty(), r.violations.join("; ")));
        out.push(check(
            &format!("{} top ext is one-dimensional", p.name),
            r.top_dims.values().all(|&d| d == 1),
            format!("{:?}", r.top_dims),
        ));
        if p.name == "sl2" {
            let ee = r.entries.iter().find(|x| x.x == "e" && x.y == "e").map(|x| x.table.get(&(2, -2)).copied());
            out.push(eq_check("sl2 ext^2(I_e, L_e<-2>)", ee.flatten(), Some(1)));
        }
    }
    Ok(out)
}

fn coinvariant_suite() -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    let start = Instant::now();
    for n in [2, 3] {
        let c = catalog::coinvariant_type_a(n, Grading::Natural)?.algebra()?;
        let k = GradedModule::simple(&c, 0);
        let t = ext_table(&k, &k, 2)?;
        // internal degree i is the twist ⟨−i⟩
        let row = |m: i32| -> BTreeMap<i32, usize> {
            t.iter().filter(|((mm, _), _)| *mm == m).map(|(&(_, j), &d)| (-j, d)).collect()
        };
        if n == 3 {
            out.push(eq_check("S3 ext^1 by internal degree", row(1), BTreeMap::from([(1, 2)])));
            out.push(eq_check("S3 ext^2 by internal degree", row(2), BTreeMap::from([(2, 2), (3, 1)])));
        } else {
            out.push(eq_check("S2 ext^2 by internal degree", row(2), BTreeMap::from([(2, 1)])));
        }
    }
    let ms = start.elapsed().as_millis();
    out.push(check("coinvariant runtime", ms < 10_000, format!("{ms} ms")));
    Ok(out)
}

fn stability_suite() -> Result<Vec<Check>, Error> {
    let r = serre::stability_check_sl2(&catalog::sl2_block(), 3, DEFAULT_MAX_LEN)?;
    let mut out: Vec<Check> = r
        .rows
        .iter()
        .map(|row| {
            eq_check(&format!("k={} (m ≤ {}) serre side equals coinvariant side", row.k, row.max_m), &row.serre_side, &row.coinvariant_side)
        })
        .collect();
    out.push(check("tables agree after reindexing by 2kℓ(w0)", r.stable(1), ""));
    Ok(out)
}

fn parabolic_suite(algebra: Option<&AlgebraPresentation>) -> Result<Vec<Check>, Error> {
    let mut defaults = parabolic_defaults()?;
    defaults.push(catalog::cell_subcategory_sl4());
    let mut out = Vec::new();
    for p in presentations(algebra, defaults) {
        let r = serre::parabolic_serre_check(&p, DEFAULT_MAX_LEN)?;
        for c in &r.cases {
            let mut line = cy_line(c);
            line.name = format!("{} {}", p.name, line.name);
            out.push(line);
        }
        let gd = r.global_dimension.map_or(format!("not reached within {DEFAULT_MAX_LEN}"), |d| d.to_string());
        out.push(check(&format!("{} global dimension", p.name), true, gd));
        if p.name == "sl4_cell" {
            out.push(eq_check("sl4_cell I_e resolution", r.injective_resolution.clone(), sl4_cell_injective_betti()));
            if let Some(v) = &r.vectors {
                out.push(eq_check("S4 vector v", v.v.clone(), CALIBRATION_S4_W0.to_vec()));
                out.push(eq_check("S4 vector w", v.w.clone(), vec![0, 0, 1, 0, 4, 0, 7, 0, 7, 0, 4, 0, 1]));
                out.push(eq_check("top degree of w - v", v.top_difference, Some(10)));
            }
        }
    }
    Ok(out)
}
