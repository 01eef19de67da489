//! Parallel vs sequential throughput on the batch-shaped workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seg_core::{
    exec, extract_enclosing_subgraph, heuristics, Graph, HeuristicKind, Model, ModelKind,
    SegConfig,
};

fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = rng.random_range(0..n);
            let mut v = rng.random_range(0..n);
            while v == u {
                v = rng.random_range(0..n);
            }
            (u, v)
        })
        .collect()
}

fn bench_extraction(c: &mut Criterion) {
    let g = random_graph(2000, 8000, 1);
    let pairs = random_pairs(2000, 256, 2);
    let mut group = c.benchmark_group("subgraph_extraction");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("batch", "parallel"), |b| {
        b.iter(|| {
            exec::map(&pairs, |&(u, v)| {
                extract_enclosing_subgraph(&g, u, v, 1, true).unwrap().local_graph.num_nodes()
            })
        })
    });
    group.bench_function(BenchmarkId::new("batch", "sequential"), |b| {
        b.iter(|| {
            exec::map_seq(&pairs, |&(u, v)| {
                extract_enclosing_subgraph(&g, u, v, 1, true).unwrap().local_graph.num_nodes()
            })
        })
    });
    group.finish();
}

fn bench_katz(c: &mut Criterion) {
    let g = random_graph(1000, 4000, 3);
    let pairs = random_pairs(1000, 128, 4);
    let kind = HeuristicKind::Katz {
        alpha: 0.05,
        max_len: 5,
    };
    let mut group = c.benchmark_group("katz_scoring");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("batch", "parallel"), |b| {
        b.iter(|| {
            heuristics::score_pairs(&g, &pairs, kind)
                .into_iter()
                .map(|s| s.unwrap())
                .collect::<Vec<f64>>()
        })
    });
    group.bench_function(BenchmarkId::new("batch", "sequential"), |b| {
        b.iter(|| {
            exec::map_seq(&pairs, |&(u, v)| {
                heuristics::heuristic_score(&g, u, v, kind).unwrap()
            })
        })
    });
    group.finish();
}

fn bench_prediction(c: &mut Criterion) {
    let n = 600;
    let g = random_graph(n, 2400, 5);
    let dim = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let feats: Vec<f64> = (0..n * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let g = g.with_features(dim, feats).unwrap();
    let pairs = random_pairs(n, 64, 7);
    let cfg = SegConfig {
        feature_dim: dim,
        max_paths: 200_000,
        ..SegConfig::default()
    };
    let (model, store) = Model::init(ModelKind::Seg, &cfg).unwrap();
    let mut group = c.benchmark_group("model_prediction");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("batch", "parallel"), |b| {
        b.iter(|| {
            exec::map(&pairs, |&(u, v)| model.score(&store, &g, u, v).unwrap())
        })
    });
    group.bench_function(BenchmarkId::new("batch", "sequential"), |b| {
        b.iter(|| {
            exec::map_seq(&pairs, |&(u, v)| model.score(&store, &g, u, v).unwrap())
        })
    });
    group.finish();
}

criterion_group!(benches, bench_extraction, bench_katz, bench_prediction);
criterion_main!(benches);
