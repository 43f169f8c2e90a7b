use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use latcount_bench::stacked_cubes;
use latcount_core::data::{reference_certificates, reference_table};
use latcount_core::*;

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate");
    g.sample_size(10);
    for (family, n) in [(Family::Distributive, 24), (Family::Modular, 16)] {
        let cfg = GenConfig::new(family, n, Mode::PiecesAndSpecials);
        g.bench_with_input(BenchmarkId::new(family.name(), n), &cfg, |b, cfg| {
            b.iter(|| {
                generate(cfg, |l| {
                    black_box(l);
                })
                .unwrap()
            })
        });
    }
    g.finish();
}

fn labeling(c: &mut Criterion) {
    let mut g = c.benchmark_group("canonical_form");
    for k in [1, 4, 8] {
        let l = stacked_cubes(k);
        g.bench_with_input(BenchmarkId::new("stacked_cubes", k), &l, |b, l| {
            b.iter(|| canonical_form(l))
        });
    }
    let wide = LeveledLattice::height_two(40);
    g.bench_function("height_two_40", |b| b.iter(|| canonical_form(&wide)));
    g.finish();
}

fn classification(c: &mut Criterion) {
    let mut all = Vec::new();
    generate(
        &GenConfig::new(Family::Modular, 14, Mode::AllViLattices),
        |l| all.push(l.clone()),
    )
    .unwrap();
    c.bench_function("classify_modular_14", |b| {
        b.iter(|| all.iter().filter(|l| classify(l).is_ok()).count())
    });
}

fn counting(c: &mut Criterion) {
    let t = reference_table(Family::Distributive).unwrap();
    let pieces = t.project(&Column::PIECES);
    c.bench_function("compose_distributive_60", |b| {
        b.iter(|| compose_counts(&pieces).unwrap())
    });
    let cert = reference_certificates(Family::Distributive).remove(0);
    if let Certificate::Classes(cert) = cert {
        c.bench_function("verify_distributive_cert", |b| {
            b.iter(|| verify_lower_bound(&cert, &t).unwrap())
        });
    }
}

fn encoding(c: &mut Criterion) {
    let l = stacked_cubes(6);
    let rec = encode_digraph6(&l);
    c.bench_function("digraph6_encode", |b| b.iter(|| encode_digraph6(&l)));
    c.bench_function("digraph6_decode", |b| {
        b.iter(|| decode_lattice(rec.as_str()).unwrap())
    });
}

criterion_group!(
    benches,
    generation,
    labeling,
    classification,
    counting,
    encoding
);
criterion_main!(benches);
