use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cycnorm_core::cyclotomic::{multiplication_sring, sweep, ClassifyOptions, CyclotomicScheme};
use cycnorm_core::perm::UnitSubgroup;
use cycnorm_core::ring::{FiniteRing, RingSpec, RingStructure};
use cycnorm_core::scheme::{point_extension, wl_refine};
use cycnorm_core::Execution;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn cyc(ring: FiniteRing, k: &[usize]) -> CyclotomicScheme {
    let ring = Arc::new(ring);
    let s = Arc::new(RingStructure::new(&ring).unwrap());
    let k = UnitSubgroup::generated(&ring, k).unwrap();
    CyclotomicScheme::new(ring, s, k).unwrap()
}

fn wl(c: &mut Criterion) {
    let mut group = c.benchmark_group("wl_point_extension");
    group.sample_size(10);
    for (name, ring) in [("GF(81)", FiniteRing::field(81).unwrap()), ("Z/121", FiniteRing::zmod(121).unwrap())] {
        let scheme = cyc(ring, &[]);
        // re-refining from the extended coloring exercises the full WL loop
        let ext = point_extension(scheme.scheme(), &[0], Execution::Parallel).unwrap();
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &exec, |b, &exec| {
                b.iter(|| point_extension(black_box(scheme.scheme()), &[0], exec).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("refine-{mode}"), name), &exec, |b, &exec| {
                b.iter(|| wl_refine(ext.degree(), black_box(ext.colors()), exec))
            });
        }
    }
    group.finish();
}

fn mult_sring(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiplication_sring");
    group.sample_size(10);
    let scheme = cyc(FiniteRing::galois_ring(3, 2, 2).unwrap(), &[]);
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new(mode, "GR(3^2,2)"), |b| {
            b.iter(|| multiplication_sring(black_box(&scheme), exec).unwrap())
        });
    }
    group.finish();
}

fn classification_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("classification_sweep");
    group.sample_size(10);
    let specs: Vec<RingSpec> = ["Z/27", "GF(27)", "Z/25", "GF(49)"].iter().map(|s| s.parse().unwrap()).collect();
    for (mode, exec) in MODES {
        let options = ClassifyOptions {
            exec,
            ..ClassifyOptions::default()
        };
        group.bench_function(mode, |b| b.iter(|| sweep(black_box(&specs), &options).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, wl, mult_sring, classification_sweep);
criterion_main!(benches);
