//! Probability bounds against simulation, and solver post-conditions.

use asmdist::coverage::montecarlo::{simulate_q_violation, simulate_triple_violation, simulate_unbridged};
use asmdist::coverage::{
    distortion_bound_curve, p_triple_violation, p_unbridged, required_reads, sample_reads, Mode, RepeatStats,
    RequiredReads, SamplingParams,
};
use asmdist::par::Exec;
use asmdist::repeats::TripleRepeat;
use asmdist::synth::{planted_genome, random_genome, Plant};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn read_starts_are_uniform() {
    let s = random_genome(&mut ChaCha8Rng::seed_from_u64(1), 1000).unwrap();
    let params = SamplingParams::new(10_000, 20, 1000, 99).unwrap();
    let reads = sample_reads(&s, &params).unwrap();
    let mut hist = vec![0f64; 1000];
    // a random genome of this size has no repeated 20-mers, so each read has one start
    for r in reads.reads() {
        let starts = r.true_starts.as_ref().unwrap();
        assert_eq!(starts.len(), 1);
        hist[starts[0] - 1] += 1.0;
    }
    let chi2: f64 = hist.iter().map(|&o| (o - 10.0) * (o - 10.0) / 10.0).sum();
    // 999 degrees of freedom: mean 999, standard deviation about 45
    assert!(chi2 < 999.0 + 4.0 * 45.0, "chi2 = {chi2}");
}

#[test]
fn bridging_probabilities_match_simulation_on_planted_genomes() {
    for genome in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(genome);
        // bridging of distinct copies is close to independent only when the
        // bridging windows are a small fraction of the genome
        let g = rng.gen_range(10_000..15_000);
        let len = rng.gen_range(10..40);
        let (_, starts) = planted_genome(&mut rng, g, &[Plant { len, copies: 3 }]).unwrap();
        let l = len + rng.gen_range(16..32);
        // aim for unbridged probabilities between about 0.2 and 0.75
        let x = rng.gen_range(0.3..1.5);
        let n = (x * g as f64 / (l - len - 1) as f64).round() as usize;
        let params = SamplingParams::new(n, l, g, 1000 + genome).unwrap();

        let single = simulate_unbridged(&params, len, 10_000, Exec::Parallel).unwrap();
        let p = p_unbridged(len, &params, Mode::Exact);
        assert!(single.agrees_with(p, 3.0), "genome {genome}: {p} vs {single:?}");

        let triple = TripleRepeat { positions: starts[0].clone(), len };
        let mixed = simulate_triple_violation(&params, &[triple], 10_000, Exec::Parallel).unwrap();
        let bound = p_triple_violation(&params, &[len], Mode::Exact);
        assert!(mixed.agrees_with(bound, 3.0), "genome {genome}: {bound} vs {mixed:?}");
    }
}

fn failure(stats: &RepeatStats, l: usize, n: usize) -> f64 {
    let p = SamplingParams::new(n, l, stats.genome_len(), 0).unwrap();
    stats.theorem1_failure(&p, Mode::Exact).unwrap()
}

#[test]
fn required_reads_is_minimal() {
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plants = [Plant { len: rng.gen_range(15..40), copies: 3 }, Plant { len: 25, copies: 2 }];
        let (s, _) = planted_genome(&mut rng, 2000, &plants).unwrap();
        let stats = RepeatStats::new(&s, 8).unwrap();
        for l in [20, 30, 42, 45, 60, 100] {
            for eps in [0.1, 0.01, 0.001] {
                match required_reads(&stats, l, eps, Mode::Exact).unwrap() {
                    RequiredReads::Finite(n) => {
                        assert!(failure(&stats, l, n) <= eps, "seed {seed} L {l} eps {eps}");
                        assert!(n == 0 || failure(&stats, l, n - 1) > eps, "seed {seed} L {l} eps {eps}");
                    }
                    RequiredReads::Infinite => panic!("seed {seed} L {l}: no finite answer"),
                }
            }
        }
    }
}

#[test]
fn required_coverage_spikes_just_above_a_triple_repeat() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (s, _) = planted_genome(&mut rng, 3000, &[Plant { len: 40, copies: 3 }]).unwrap();
    // a large order keeps the covering term from dominating
    let stats = RepeatStats::new(&s, 20).unwrap();
    let coverage = |l: usize| {
        let n = required_reads(&stats, l, 0.01, Mode::Exact).unwrap().finite().unwrap();
        n as f64 * l as f64 / 3000.0
    };
    let longest = *stats.triple_lengths().iter().max().unwrap();
    assert!(longest >= 40);
    let spike = coverage(longest + 2);
    assert!(spike > 3.0 * coverage(longest + 30), "{spike}");
    // reads no longer than the repeat plus one can never bridge it, so it costs nothing
    assert!(coverage(longest + 1) < spike);
}

#[test]
fn repeat_free_requirement_is_covering_only() {
    let s = random_genome(&mut ChaCha8Rng::seed_from_u64(2), 400).unwrap();
    let stats = RepeatStats::new(&s, 2).unwrap();
    // short random repeats exist, but at this coverage they are all bridged or all not
    let n = required_reads(&stats, 60, 0.01, Mode::Exact).unwrap().finite().unwrap();
    let p = SamplingParams::new(n, 60, 400, 0).unwrap();
    assert!(asmdist::coverage::p_not_k_covered(&p, 2) <= 0.01);
}

#[test]
fn q_bound_dominates_simulation() {
    for seed in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(50 + seed);
        let plants = [Plant { len: 12, copies: 2 }, Plant { len: 14, copies: 2 }];
        let (s, _) = planted_genome(&mut rng, 300, &plants).unwrap();
        let k = 4;
        let stats = RepeatStats::new(&s, k).unwrap();
        for (l, c) in [(20, 8.0), (24, 15.0), (30, 30.0)] {
            let params = SamplingParams::from_coverage(c, l, 300, seed).unwrap();
            for q in [k, 8, l - 2] {
                let bound = stats.p_q_violation(&params, q, Mode::Exact).unwrap();
                let est = simulate_q_violation(&s, &params, k, q, 2000, Exec::Parallel).unwrap();
                assert!(bound >= est.mean() - 3.0 * est.std_err(), "seed {seed} L {l} q {q}: {bound} vs {est:?}");
            }
        }
    }
}

#[test]
fn curve_gaps_follow_the_read_requirement() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (s, _) = planted_genome(&mut rng, 1500, &[Plant { len: 20, copies: 3 }, Plant { len: 30, copies: 2 }]).unwrap();
    let k = 6;
    let stats = RepeatStats::new(&s, k).unwrap();
    let ls = [12, 22, 24, 35, 60];
    let cs = [2.0, 10.0, 40.0, 1000.0];
    let rows = distortion_bound_curve(&s, &stats, &ls, &cs, 0.01, Mode::Exact, Exec::Parallel).unwrap();
    let again = distortion_bound_curve(&s, &stats, &ls, &cs, 0.01, Mode::Exact, Exec::Sequential).unwrap();
    assert_eq!(rows, again);
    for r in &rows {
        let need = required_reads(&stats, r.read_len, 0.01, Mode::Exact).unwrap();
        let short = match need {
            RequiredReads::Finite(n) => r.reads < n,
            RequiredReads::Infinite => true,
        };
        if short {
            assert!(r.gap, "{r:?}");
        }
        if let Some(u) = r.upper_log10 {
            assert!(u >= r.lower_log10 - 1e-9, "{r:?}");
        }
    }
    let rich = rows.iter().find(|r| r.read_len == 60 && r.coverage == 1000.0).unwrap();
    assert_eq!(rich.q_star, Some(58));
    assert!((rich.upper_log10.unwrap() - rich.lower_log10).abs() < 1e-9);
}

proptest! {
    #[test]
    fn unbridged_is_monotone(n in 0usize..5000, l in 2usize..200, ell in 0usize..200, g in 200usize..20_000) {
        let p = SamplingParams::new(n, l, g, 0).unwrap();
        for mode in [Mode::Exact, Mode::Approx] {
            let v = p_unbridged(ell, &p, mode);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(p_unbridged(ell, &p.with_reads(n + 10), mode) <= v);
            if ell > 0 {
                prop_assert!(p_unbridged(ell - 1, &p, mode) <= v);
            }
        }
        prop_assert!(p_unbridged(ell, &p, Mode::Approx) >= p_unbridged(ell, &p, Mode::Exact) - 1e-15);
    }

    #[test]
    fn exact_and_approx_agree_when_sparse(n in 1usize..2000, span in 1usize..10, g in 100_000usize..1_000_000) {
        let p = SamplingParams::new(n, span + 1, g, 0).unwrap();
        let (e, a) = (p_unbridged(0, &p, Mode::Exact), p_unbridged(0, &p, Mode::Approx));
        prop_assert!((a - e).abs() <= 0.01 * a);
    }
}
