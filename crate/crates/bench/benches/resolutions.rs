use criterion::{criterion_group, criterion_main, Criterion};

use klcy::findimalg::{minimal_resolution, DEFAULT_MAX_LEN};
use klcy::serre::cy_check;
use klcy_bench::injective_e;

fn resolutions(c: &mut Criterion) {
    for name in ["sl2", "parabolic5", "sl4_cell"] {
        let (_, m) = injective_e(name);
        c.bench_function(&format!("resolve I_e over {name}"), |b| b.iter(|| minimal_resolution(&m, DEFAULT_MAX_LEN)));
    }
}

fn serre(c: &mut Criterion) {
    let (_, m) = injective_e("parabolic4");
    c.bench_function("cy check I_e over parabolic4", |b| b.iter(|| cy_check("I_e", &m, None, DEFAULT_MAX_LEN).unwrap()));
}

criterion_group!(benches, resolutions, serre);
criterion_main!(benches);
