use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use modalkit::decision::bounded_countermodel_with;
use modalkit::kripke::FrameClass;
use modalkit::{parse, Exec};

fn countermodel_search(c: &mut Criterion) {
    let cases = [
        // No countermodel exists, so every frame is visited.
        ("dot2-wd-4", FrameClass::WeaklyDirectedPreorder, "~K1 ~K1 p -> K1 ~K1 ~p", 4),
        ("dot2-preorder-4", FrameClass::Preorder, "K1 ~K1 ~K1 p -> K1 p | ~K1 p", 4),
        ("two-agents-3", FrameClass::Preorder, "K1 K2 (p -> q) -> K2 K1 p -> K1 K2 q | q", 3),
    ];
    let mut group = c.benchmark_group("bounded_countermodel");
    group.sample_size(10);
    for (name, cls, text, bound) in cases {
        let f = parse(text).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &f, |b, f| {
                b.iter(|| bounded_countermodel_with(cls, black_box(f), bound, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, countermodel_search);
criterion_main!(benches);
