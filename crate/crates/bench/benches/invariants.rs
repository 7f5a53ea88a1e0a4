use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use knotform_bench::{matrix, EXPRESSIONS};
use knotform_core::{alexander, obstruction_report, signature, torus_seifert, Angle, SignatureFunction};

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("torus_seifert");
    for (m, n) in [(2, 15), (5, 7), (9, 10), (14, 15)] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{m},{n}")),
            &(m, n),
            |b, &(m, n)| b.iter(|| torus_seifert(m, n).unwrap()),
        );
    }
    g.finish();
}

fn classical(c: &mut Criterion) {
    let mut g = c.benchmark_group("classical");
    for text in EXPRESSIONS {
        let v = matrix(text);
        g.bench_with_input(BenchmarkId::new("alexander", text), &v, |b, v| b.iter(|| alexander(v)));
        g.bench_with_input(BenchmarkId::new("signature", text), &v, |b, v| b.iter(|| signature(v)));
    }
    g.finish();
}

fn signature_function(c: &mut Criterion) {
    let v = matrix("LM");
    let mut g = c.benchmark_group("signature_function");
    g.sample_size(10);
    g.bench_function("LM/single_angle", |b| {
        b.iter(|| SignatureFunction::new(&v).at(Angle::new(1, 10)))
    });
    g.bench_function("LM/report_64", |b| b.iter(|| obstruction_report(&v, 64)));
    g.finish();
}

criterion_group!(benches, construction, classical, signature_function);
criterion_main!(benches);
