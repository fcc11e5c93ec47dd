//! Randomized checks of the assembly guarantees.

use asmdist::distortion::{count_eulerian_distinct, kmer_graph_cycle_count};
use asmdist::greedy::{check_theorem1_conditions, check_theorem2_conditions, greedy_assemble};
use asmdist::seqcore::{CircularSequence, ReadSet};
use asmdist::seqgraph::{check_sufficiency, eulerianize};
use asmdist::synth::{planted_genome, Plant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    s: CircularSequence,
    reads: ReadSet,
    k: usize,
    l: usize,
}

fn instance(seed: u64) -> Option<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = rng.gen_range(50..=300);
    let l = rng.gen_range(8..=20);
    let k = rng.gen_range(3..=6);
    let plants: Vec<Plant> = (0..rng.gen_range(0..3))
        .map(|_| Plant { len: rng.gen_range(4..=24), copies: rng.gen_range(2..=3) })
        .collect();
    let (s, _) = planted_genome(&mut rng, g, &plants).ok()?;
    let c = rng.gen_range(10.0..30.0);
    let n = ((c * g as f64) / l as f64).round() as usize;
    for _ in 0..50 {
        let starts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=g)).collect();
        let reads = ReadSet::from_starts(&s, l, &starts).unwrap();
        if check_theorem1_conditions(&s, &reads, k).unwrap() {
            return Some(Instance { s, reads, k, l });
        }
    }
    None
}

#[test]
fn sufficient_when_reads_cover_and_triples_are_uniform() {
    let mut qualifying = 0;
    for seed in 0..200 {
        let Some(inst) = instance(seed) else { continue };
        qualifying += 1;
        let a = greedy_assemble(&inst.reads, inst.k, Some(inst.s.len())).unwrap();
        assert!(check_sufficiency(&a.graph, &inst.s).unwrap().is_some(), "seed {seed}");
    }
    assert!(qualifying >= 150, "{qualifying}");
}

#[test]
fn cycle_count_bounded_by_kmer_graph() {
    let mut checked = 0;
    for seed in 1000..1400 {
        let Some(inst) = instance(seed) else { continue };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = rng.gen_range(inst.k..=inst.l - 2);
        if !check_theorem2_conditions(&inst.s, &inst.reads, inst.k, q).unwrap() {
            continue;
        }
        checked += 1;
        let a = greedy_assemble(&inst.reads, inst.k, Some(inst.s.len())).unwrap();
        let c = check_sufficiency(&a.graph, &inst.s).unwrap().expect("sufficient");
        let ours = count_eulerian_distinct(&eulerianize(&a.graph, &c).unwrap().to_multigraph()).unwrap();
        let bound = kmer_graph_cycle_count(&inst.s, q).unwrap();
        assert!(ours <= bound, "seed {seed}: {ours} > {bound}");
    }
    assert!(checked >= 50, "{checked}");
}
