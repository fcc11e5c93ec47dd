//! Smallest read count meeting a target failure probability.

use serde::Serialize;

use super::{mixed_triple_probability, p_not_k_covered, p_unbridged, chain_window, Mode, RepeatStats, SamplingParams};
use crate::error::{invalid, Result};

/// Coverage depth beyond which the solver gives up.
pub const MAX_COVERAGE: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "reads")]
pub enum RequiredReads {
    Finite(usize),
    /// No read count up to [`MAX_COVERAGE`] meets the target.
    Infinite,
}

impl RequiredReads {
    pub fn finite(self) -> Option<usize> {
        match self {
            RequiredReads::Finite(n) => Some(n),
            RequiredReads::Infinite => None,
        }
    }
}

/// Smallest `n` in `lo..=hi` with `pred(n)`, given that `pred` is monotone
/// false-then-true on that range and `pred(hi)` holds.
fn first_true(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Smallest read count `N` for which the sufficiency-condition failure bound
/// of [`RepeatStats::theorem1_failure`] is at most `epsilon`.
///
/// The covering term falls with `N`, and each triple term falls once its
/// unbridged probability drops below one half. Below that point the terms
/// can rise, so read counts there are scanned one by one; above it the bound
/// is monotone and bisection applies. The answer is the global minimum.
pub fn required_reads(stats: &RepeatStats, read_len: usize, epsilon: f64, mode: Mode) -> Result<RequiredReads> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("epsilon = {epsilon} outside (0, 1)"));
    }
    let g = stats.genome_len();
    let base = SamplingParams::new(0, read_len, g, 0)?;
    let at = |n: usize| base.with_reads(n);
    let n_max = (MAX_COVERAGE * g as f64 / read_len as f64).ceil() as usize;
    let window = chain_window(stats.order(), read_len);
    let covered = |n: usize| p_not_k_covered(&at(n), window) <= epsilon;
    if !covered(n_max) {
        return Ok(RequiredReads::Infinite);
    }
    let n_lo = first_true(0, n_max, covered);
    // triples too long to be bridged never change their term
    let longest = stats.triple_lengths().iter().copied().filter(|&l| l + 1 < read_len).max();
    let n_mono = match longest {
        Some(l) => {
            let settled = |n: usize| p_unbridged(l, &at(n), mode) <= 0.5;
            if settled(n_max) {
                first_true(0, n_max, settled)
            } else {
                n_max
            }
        }
        None => 0,
    };
    let hist: Vec<(usize, usize)> = stats.triple_histogram().into_iter().collect();
    let failure = |n: usize| {
        let p = at(n);
        let t: f64 = hist.iter().map(|&(l, c)| c as f64 * mixed_triple_probability(p_unbridged(l, &p, mode))).sum();
        (t + p_not_k_covered(&p, window)).min(1.0)
    };
    let ok = |n: usize| failure(n) <= epsilon;
    for n in n_lo..n_mono.min(n_max) {
        if ok(n) {
            return Ok(RequiredReads::Finite(n));
        }
    }
    let start = n_lo.max(n_mono);
    if !ok(n_max) {
        return Ok(RequiredReads::Infinite);
    }
    Ok(RequiredReads::Finite(first_true(start, n_max, ok)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::CircularSequence;

    #[test]
    fn bisection_helper() {
        assert_eq!(first_true(0, 100, |n| n >= 37), 37);
        assert_eq!(first_true(5, 5, |_| true), 5);
    }

    #[test]
    fn repeat_free_genome_needs_covering_only() {
        let s: CircularSequence = "ACGT".parse().unwrap();
        let stats = RepeatStats::new(&s, 1).unwrap();
        let n = required_reads(&stats, 3, 0.01, Mode::Exact).unwrap().finite().unwrap();
        let p = |n| p_not_k_covered(&SamplingParams::new(n, 3, 4, 0).unwrap(), 1);
        assert!(p(n) <= 0.01 && p(n - 1) > 0.01);
        assert!(required_reads(&stats, 3, 1.5, Mode::Exact).is_err());
    }

    #[test]
    fn read_length_at_order_is_infeasible() {
        let s: CircularSequence = "ACGTTGCAAGCT".parse().unwrap();
        let stats = RepeatStats::new(&s, 4).unwrap();
        assert_eq!(required_reads(&stats, 4, 0.01, Mode::Exact).unwrap(), RequiredReads::Infinite);
    }
}
