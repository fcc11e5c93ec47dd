use std::hint::black_box;

use asmdist::coverage::montecarlo::simulate_unbridged;
use asmdist::coverage::{distortion_bound_curve, Mode, RepeatStats, SamplingParams};
use asmdist::distortion::count_eulerian_distinct_with;
use asmdist::par::Exec;
use asmdist::seqgraph::build_kmer_graph;
use asmdist::synth::{planted_genome, Plant};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn eulerian_count(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (s, _) = planted_genome(&mut rng, 3000, &[Plant { len: 40, copies: 3 }]).unwrap();
    // around 250 nodes survive reduction, so the determinant goes through the modular path
    let g = build_kmer_graph(&s, 5).unwrap().to_multigraph();
    let mut group = c.benchmark_group("eulerian_count");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| count_eulerian_distinct_with(black_box(&g), exec).unwrap())
        });
    }
    group.finish();
}

fn bound_curve(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (s, _) = planted_genome(&mut rng, 2000, &[Plant { len: 30, copies: 3 }, Plant { len: 45, copies: 2 }]).unwrap();
    let stats = RepeatStats::new(&s, 8).unwrap();
    let ls = [20, 35, 50, 80];
    let cs = [5.0, 20.0, 60.0];
    let mut group = c.benchmark_group("bound_curve");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| distortion_bound_curve(&s, &stats, &ls, &cs, 0.01, Mode::Exact, exec).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let params = SamplingParams::new(500, 100, 10_000, 3).unwrap();
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulate_unbridged(&params, 50, 2000, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eulerian_count, bound_curve, monte_carlo);
criterion_main!(benches);
