use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pantslab::enumerate::{enumerate_classes, DEFAULT_CAP};
use pantslab::oracle::{class_graph, Metric, OracleConfig};
use pantslab::random::{random_cubic, rng};
use pantslab::reduction::to_treelike;
use pantslab::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_0_10");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| enumerate_classes(0, 10, DEFAULT_CAP, exec).unwrap().len())
        });
    }
    group.finish();
}

fn all_pairs(c: &mut Criterion) {
    let cfg = OracleConfig::with_metric(Metric::Cubical);
    let cg = class_graph(0, 10, DEFAULT_CAP, &cfg).unwrap();
    let mut group = c.benchmark_group("all_pairs_0_10");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| cg.all_pairs(exec).len()));
    }
    group.finish();
}

fn reduction_sweep(c: &mut Criterion) {
    let seeds: Vec<u64> = (0..16).collect();
    let mut group = c.benchmark_group("to_treelike_g64_x16");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map(&seeds, |&s| to_treelike(&random_cubic(64, &mut rng(s))).unwrap().0.total_cost())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, all_pairs, reduction_sweep);
criterion_main!(benches);
