//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use klcy::catalog;
use klcy::{CoxeterGroup, GradedAlgebra, GradedModule};

pub fn symmetric(n: usize) -> Arc<CoxeterGroup> {
    Arc::new(CoxeterGroup::symmetric(n).expect("symmetric group"))
}

/// `I_e` over a bundled algebra.
pub fn injective_e(name: &str) -> (Arc<GradedAlgebra>, GradedModule) {
    let alg = catalog::by_name(name).and_then(|p| p.algebra()).expect("bundled algebra");
    // parabolic blocks name the dominant vertex after its index, last
    let e = alg.vertex("e").unwrap_or(alg.num_vertices() - 1);
    let m = GradedModule::injective(&alg, e);
    (alg, m)
}
