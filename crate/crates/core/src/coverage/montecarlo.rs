//! Simulation estimates of the events bounded analytically in this module.
//!
//! Trial `i` of a run draws its reads from stream `i` of the ChaCha generator
//! keyed by the run's seed. Estimates therefore do not depend on how trials
//! are scheduled, and runs with different seeds share no trials.

use serde::Serialize;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{draw_starts, SamplingParams};
use crate::error::{invalid, Result};
use crate::par::{self, Exec};
use crate::repeats::{find_linked_pairs, CircularIndex, Placements, RepeatPair, TripleClass, TripleRepeat};
use crate::seqcore::CircularSequence;

/// Fraction of trials in which an event occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn mean(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// Binomial standard error of the mean.
    pub fn std_err(&self) -> f64 {
        let p = self.mean();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// `value` lies within `sigmas` standard errors of the mean. A
    /// zero-variance estimate is widened to one hit in `trials`.
    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        let se = self.std_err().max(1.0 / self.trials as f64);
        (value - self.mean()).abs() <= sigmas * se
    }
}

fn trial_placements(params: &SamplingParams, trial: u64) -> Placements {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(trial);
    Placements::from_starts(draw_starts(&mut rng, params), params.read_len, params.genome_len)
}

fn run(trials: u64, exec: Exec, hit: impl Fn(u64) -> bool + Sync + Send) -> Result<Estimate> {
    if trials == 0 {
        return invalid("at least one trial is needed");
    }
    let hits = par::count_range(exec, trials as usize, |i| hit(i as u64));
    Ok(Estimate { hits, trials })
}

/// How often the segment of length `ell` at position 1 is left unbridged.
pub fn simulate_unbridged(params: &SamplingParams, ell: usize, trials: u64, exec: Exec) -> Result<Estimate> {
    run(trials, exec, |i| !trial_placements(params, i).is_bridged(1, ell))
}

/// How often some listed triple repeat ends up mixed.
pub fn simulate_triple_violation(
    params: &SamplingParams,
    triples: &[TripleRepeat],
    trials: u64,
    exec: Exec,
) -> Result<Estimate> {
    run(trials, exec, |i| {
        let pl = trial_placements(params, i);
        triples.iter().any(|t| pl.classify(t) == TripleClass::Mixed)
    })
}

/// How often some repeat of length at most `q` is not doubly bridged, or some
/// linked pair with link length in `[k - 1, q]` has neither repeat doubly bridged.
pub fn simulate_q_violation(
    s: &CircularSequence,
    params: &SamplingParams,
    k: usize,
    q: usize,
    trials: u64,
    exec: Exec,
) -> Result<Estimate> {
    if q < k || k == 0 {
        return invalid(format!("need 1 <= k <= q, got k = {k}, q = {q}"));
    }
    let g = s.len();
    let pairs = CircularIndex::new(s).maximal_pairs(1);
    let (short, long): (Vec<RepeatPair>, Vec<RepeatPair>) = pairs.into_iter().partition(|r| r.len <= q);
    let links: Vec<(RepeatPair, RepeatPair)> =
        find_linked_pairs(g, &long, k - 1, q)?.into_iter().map(|lp| (lp.first, lp.second)).collect();
    run(trials, exec, |i| {
        let pl = trial_placements(params, i);
        short.iter().any(|r| !pl.doubly_bridged(r))
            || links.iter().any(|(a, b)| !pl.doubly_bridged(a) && !pl.doubly_bridged(b))
    })
}

/// How often neighbouring read starts are more than `window` apart somewhere.
pub fn simulate_not_covered(params: &SamplingParams, window: usize, trials: u64, exec: Exec) -> Result<Estimate> {
    run(trials, exec, |i| !trial_placements(params, i).k_covers(window))
}
