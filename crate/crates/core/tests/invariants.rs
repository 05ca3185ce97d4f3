use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use klcy::catalog;
use klcy::cells::{CellKind, Cells};
use klcy::findimalg::{ext_table, is_isomorphic, minimal_resolution, DEFAULT_MAX_LEN};
use klcy::serre::serre_of;
use klcy::shifts::{shift_of_shape, CYShift};
use klcy::typea::{shape_a, Partition};
use klcy::{CoxeterGroup, GradedAlgebra, GradedModule, KLTable};

fn s4() -> &'static (Arc<CoxeterGroup>, KLTable) {
    static CELL: OnceLock<(Arc<CoxeterGroup>, KLTable)> = OnceLock::new();
    CELL.get_or_init(|| {
        let g = Arc::new(CoxeterGroup::symmetric(4).unwrap());
        let kl = KLTable::new(g.clone());
        (g, kl)
    })
}

fn algebras() -> &'static Vec<Arc<GradedAlgebra>> {
    static CELL: OnceLock<Vec<Arc<GradedAlgebra>>> = OnceLock::new();
    CELL.get_or_init(|| {
        ["sl2", "parabolic3", "parabolic4", "sl4_cell"]
            .iter()
            .map(|n| catalog::by_name(n).unwrap().algebra().unwrap())
            .collect()
    })
}

fn module(alg: &Arc<GradedAlgebra>, kind: u8, v: usize, shift: i32) -> GradedModule {
    let v = v % alg.num_vertices();
    let m = match kind % 3 {
        0 => GradedModule::projective(alg, v),
        1 => GradedModule::injective(alg, v),
        _ => GradedModule::simple(alg, v),
    };
    m.shift(shift)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn lengths_under_inverse_and_w0(i in 0usize..24) {
        let (g, _) = s4();
        let w = g.element(i);
        prop_assert_eq!(g.length(w), g.length(g.inverse(w)));
        prop_assert_eq!(g.length(g.w0_mult(w)), g.length(g.longest_element()) - g.length(w));
        prop_assert!(g.bruhat_leq(g.identity(), w).unwrap());
        prop_assert!(g.bruhat_leq(w, g.longest_element()).unwrap());
    }

    #[test]
    fn a_function_constant_on_two_sided_cells(i in 0usize..24, j in 0usize..24) {
        let (g, kl) = s4();
        let cells = Cells::new(kl);
        let (x, y) = (g.element(i), g.element(j));
        if cells.partition(CellKind::TwoSided).same_cell(x, y) {
            prop_assert_eq!(cells.a_function(x).unwrap(), cells.a_function(y).unwrap());
        }
        prop_assert_eq!(cells.a_function(x).unwrap(), cells.a_function(g.inverse(x)).unwrap());
        let left = cells.partition(CellKind::Left).same_cell(x, y);
        let right = cells.partition(CellKind::Right).same_cell(g.inverse(x), g.inverse(y));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shift_components_sum_to_twice_a(n in 1usize..9, pick in 0usize..64) {
        let parts = Partition::all(n);
        let lambda = &parts[pick % parts.len()];
        let CYShift { hom_shift, grade_shift } = shift_of_shape(lambda);
        prop_assert_eq!(hom_shift + grade_shift, 2 * shape_a(lambda) as i64);
        prop_assert!(hom_shift >= 0 && hom_shift % 2 == 0);
    }

    #[test]
    fn resolution_has_homology_only_in_degree_zero(a in 0usize..4, kind in 0u8..3, v in 0usize..4, shift in -3i32..3) {
        let alg = &algebras()[a];
        let m = module(alg, kind, v, shift);
        let p = minimal_resolution(&m, DEFAULT_MAX_LEN);
        prop_assume!(p.truncated().is_none());
        let c = p.to_complex();
        prop_assert_eq!(c.homology_support(), vec![0]);
        prop_assert!(is_isomorphic(&c.homology(0), &m).unwrap().is_iso());
    }

    #[test]
    fn duality_is_an_involution(a in 0usize..4, kind in 0u8..3, v in 0usize..4, shift in -3i32..3) {
        let alg = &algebras()[a];
        let m = module(alg, kind, v, shift);
        prop_assert!(is_isomorphic(&m.dual().dual(), &m).unwrap().is_iso());
        let d = m.dual();
        let flipped: Vec<_> = m.graded_dims().into_iter().map(|((v, k), n)| ((v, -k), n)).collect();
        prop_assert_eq!(d.graded_dims().into_iter().collect::<Vec<_>>(), {
            let mut f = flipped; f.sort(); f
        });
    }

    #[test]
    fn ext_zero_is_hom(a in 0usize..4, k1 in 0u8..3, v1 in 0usize..4, k2 in 0u8..3, v2 in 0usize..4, j in -3i32..3) {
        let alg = &algebras()[a];
        let m = module(alg, k1, v1, 0);
        let n = module(alg, k2, v2, 0);
        let t = ext_table(&m, &n, 0).unwrap();
        let homs = m.hom(&n.shift(j)).unwrap().len();
        prop_assert_eq!(t.get(&(0, j)).copied().unwrap_or(0), homs);
    }

    #[test]
    fn serre_sends_projectives_to_injectives(a in 0usize..4, v in 0usize..4, shift in -2i32..2) {
        let alg = &algebras()[a];
        let v = v % alg.num_vertices();
        let s = serre_of(&GradedModule::projective(alg, v).shift(shift), DEFAULT_MAX_LEN).unwrap();
        prop_assert_eq!(s.homology_support(), vec![0]);
        let inj = GradedModule::injective(alg, v).shift(shift);
        prop_assert!(is_isomorphic(&s.homology(0), &inj).unwrap().is_iso());
    }
}

#[test]
fn a_increases_along_the_two_sided_order() {
    let (g, kl) = s4();
    let cells = Cells::new(kl);
    let j = cells.partition(CellKind::TwoSided);
    assert!(j.has_order());
    let mut strict = 0;
    for x in g.enumerate() {
        for y in g.enumerate() {
            let (cx, cy) = (j.class_of(x), j.class_of(y));
            if cx != cy && j.leq(cx, cy) == Some(true) {
                strict += 1;
                assert!(cells.a_function(x).unwrap() < cells.a_function(y).unwrap());
            }
        }
    }
    assert!(strict > 0);
}
