use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hyperbasis_bench::{regular_arc_graph, GENERA};
use hyperbasis_core::growth::simulate;
use hyperbasis_core::pipeline::run_pipeline;
use hyperbasis_core::prune::prune;
use hyperbasis_core::{CoverComplex, RegularDoubledPolygonModel};

fn growth(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    for g in GENERA {
        let model = RegularDoubledPolygonModel::new(g).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &model, |b, m| b.iter(|| simulate(black_box(m)).unwrap()));
    }
    group.finish();
}

fn pruning_and_cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("prune");
    for g in GENERA {
        let map = regular_arc_graph(g);
        group.bench_with_input(BenchmarkId::from_parameter(g), &map, |b, m| b.iter(|| prune(black_box(m)).unwrap()));
    }
    group.finish();

    let mut group = c.benchmark_group("cover_rank");
    for g in GENERA {
        let map = regular_arc_graph(g);
        let h = prune(&map).unwrap().subgraph();
        group.bench_with_input(BenchmarkId::from_parameter(g), &(map, h), |b, (m, h)| {
            b.iter(|| CoverComplex::build(black_box(m), h).unwrap().partial_basis_report().unwrap())
        });
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    for g in GENERA {
        let model = RegularDoubledPolygonModel::new(g).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &model, |b, m| b.iter(|| run_pipeline(black_box(m), None).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, growth, pruning_and_cover, pipeline);
criterion_main!(benches);
