use criterion::{criterion_group, criterion_main, Criterion};

use klcy::cells::{CellKind, Cells};
use klcy::typea::cells_via_rs;
use klcy::KLTable;
use klcy_bench::symmetric;

fn kl_tables(c: &mut Criterion) {
    let s4 = symmetric(4);
    let s5 = symmetric(5);
    c.bench_function("kl S4", |b| b.iter(|| KLTable::new(s4.clone())));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("kl S5", |b| b.iter(|| KLTable::new(s5.clone())));
    g.finish();
}

fn cells(c: &mut Criterion) {
    let s5 = symmetric(5);
    let kl = KLTable::new(s5.clone());
    c.bench_function("two-sided cells S5 from mu-graph", |b| {
        b.iter(|| Cells::new(&kl).partition(CellKind::TwoSided).len())
    });
    c.bench_function("left cells S5 by RS", |b| b.iter(|| cells_via_rs(&s5, CellKind::Left).unwrap().len()));
    c.bench_function("a-function S5", |b| {
        b.iter(|| {
            let cells = Cells::new(&kl);
            s5.enumerate().map(|w| cells.a_function(w).unwrap()).sum::<u32>()
        })
    });
}

criterion_group!(benches, kl_tables, cells);
criterion_main!(benches);
