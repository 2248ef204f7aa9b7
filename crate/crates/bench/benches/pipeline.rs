use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use depthcut::baselines::{bsp_standalone, prism_decompose};
use depthcut::cutter::{eliminate_cycles, CutParams};
use depthcut::depth::{pieces_from_triangles, verify_acyclic};
use depthcut_bench::workloads;
use std::hint::black_box;

fn strategies(c: &mut Criterion) {
    let mut g = c.benchmark_group("strategies");
    g.sample_size(10);
    for (name, scene) in workloads() {
        g.bench_with_input(BenchmarkId::new("prism", name), &scene, |b, s| b.iter(|| prism_decompose(black_box(s)).unwrap()));
        g.bench_with_input(BenchmarkId::new("bsp", name), &scene, |b, s| b.iter(|| bsp_standalone(black_box(s))));
        for d in [2, 3] {
            let params = CutParams::new(d);
            g.bench_with_input(BenchmarkId::new(format!("partition_d{d}"), name), &scene, |b, s| {
                b.iter(|| eliminate_cycles(black_box(s), &params).unwrap())
            });
        }
    }
    g.finish();
}

fn verifier(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    for (name, scene) in workloads() {
        let pieces = pieces_from_triangles(&scene.triangles);
        g.bench_with_input(BenchmarkId::from_parameter(name), &pieces, |b, p| b.iter(|| verify_acyclic(black_box(p)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, strategies, verifier);
criterion_main!(benches);
