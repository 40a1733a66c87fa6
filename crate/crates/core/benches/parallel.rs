use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use smallcover::charmap::find_orientable_coloring;
use smallcover::cover::{cw_presentation, simplify, SimplifyLimits, SpanningTree};
use smallcover::morse::{random_order, sample_orders};
use smallcover::pi1::{count_homs_sequential, FiniteGroupTable, Presentation};
use smallcover::Polytope;

fn simplified_cw(p: &Polytope) -> Presentation {
    let map = find_orientable_coloring(p).expect("4-colorable");
    let cw = cw_presentation(p, &map, &SpanningTree::bfs(p)).expect("valid input");
    simplify(&cw, SimplifyLimits::default()).presentation
}

fn hom_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_homs");
    group.sample_size(10);
    let cases = [
        ("dodecahedron/Z2^2", Polytope::dodecahedron(), FiniteGroupTable::z2_power(2)),
        ("prism6/Z2^3", Polytope::prism(6).unwrap(), FiniteGroupTable::z2_power(3)),
        ("cube/S3", Polytope::cube(), FiniteGroupTable::symmetric(3).unwrap()),
    ];
    for (name, p, h) in cases {
        let pres = simplified_cw(&p);
        group.bench_with_input(BenchmarkId::new("sequential", name), &pres, |b, pres| {
            b.iter(|| count_homs_sequential(pres, &h, u64::MAX).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", name), &pres, |b, pres| {
            b.iter(|| smallcover::pi1::count_homs_parallel(pres, &h, u64::MAX).unwrap())
        });
    }
    group.finish();
}

fn order_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_orders");
    group.sample_size(10);
    let p = Polytope::permutohedron();
    group.bench_function("sequential/permutohedron/200", |b| {
        b.iter(|| {
            use rand::SeedableRng;
            (0..200u64)
                .map(|i| random_order(&p, &mut rand_chacha::ChaCha8Rng::seed_from_u64(i)).unwrap())
                .count()
        })
    });
    group.bench_function("library/permutohedron/200", |b| b.iter(|| sample_orders(&p, 200, 0).unwrap().len()));
    group.finish();
}

criterion_group!(benches, hom_counts, order_sampling);
criterion_main!(benches);
