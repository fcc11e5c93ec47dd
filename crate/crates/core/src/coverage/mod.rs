//! Uniform read sampling and the probability that read placements violate
//! the assembly conditions.
//!
//! Bridging events for distinct segments are treated as independent, and
//! every bound here is a union bound. All probabilities are clamped to `[0, 1]`.

mod curve;
pub mod montecarlo;
mod solve;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::repeats::{find_linked_pairs, CircularIndex};
use crate::seqcore::{CircularSequence, ReadSet};

pub use curve::{distortion_bound_curve, CurveRow};
pub use solve::{required_reads, RequiredReads, MAX_COVERAGE};

/// Read count, read length and genome length of one sequencing experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplingParams {
    pub reads: usize,
    pub read_len: usize,
    pub genome_len: usize,
    pub seed: u64,
}

impl SamplingParams {
    pub fn new(reads: usize, read_len: usize, genome_len: usize, seed: u64) -> Result<Self> {
        if read_len == 0 || read_len > genome_len {
            return invalid(format!("read length {read_len} outside 1..={genome_len}"));
        }
        Ok(SamplingParams { reads, read_len, genome_len, seed })
    }

    /// Parameters whose read count is `c G / L` rounded half to even.
    pub fn from_coverage(coverage: f64, read_len: usize, genome_len: usize, seed: u64) -> Result<Self> {
        if !(coverage >= 0.0 && coverage.is_finite()) {
            return invalid(format!("coverage depth {coverage} is not a nonnegative number"));
        }
        let reads = reads_for_coverage(coverage, read_len, genome_len);
        SamplingParams::new(reads, read_len, genome_len, seed)
    }

    pub fn with_reads(self, reads: usize) -> Self {
        SamplingParams { reads, ..self }
    }

    /// Coverage depth `N L / G`.
    pub fn coverage(&self) -> f64 {
        self.reads as f64 * self.read_len as f64 / self.genome_len as f64
    }
}

pub fn reads_for_coverage(coverage: f64, read_len: usize, genome_len: usize) -> usize {
    (coverage * genome_len as f64 / read_len as f64).round_ties_even() as usize
}

/// How the per-segment unbridged probability is evaluated. A segment of
/// length `l` is bridged by a read starting at one of `L - l - 1` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `(1 - (L - l - 1) / G)^N`
    #[default]
    Exact,
    /// `exp(-N (L - l - 1) / G)`
    Approx,
}

/// Draws `N` reads with i.i.d. uniform starts from `s`.
pub fn sample_reads(s: &CircularSequence, params: &SamplingParams) -> Result<ReadSet> {
    if params.genome_len != s.len() {
        return invalid(format!("parameters are for G = {} but the genome has {}", params.genome_len, s.len()));
    }
    if params.read_len > s.len() {
        return invalid(format!("read length {} exceeds genome length {}", params.read_len, s.len()));
    }
    ReadSet::from_starts(s, params.read_len, &sample_starts(params))
}

/// The 1-based start positions `sample_reads` would use.
pub fn sample_starts(params: &SamplingParams) -> Vec<usize> {
    draw_starts(&mut ChaCha8Rng::seed_from_u64(params.seed), params)
}

fn draw_starts<R: Rng>(rng: &mut R, params: &SamplingParams) -> Vec<usize> {
    (0..params.reads).map(|_| rng.gen_range(1..=params.genome_len)).collect()
}

fn clamp01(p: f64) -> f64 {
    if p.is_nan() {
        1.0
    } else {
        p.clamp(0.0, 1.0)
    }
}

/// Probability that a fixed segment of length `ell` is not bridged by any read.
pub fn p_unbridged(ell: usize, params: &SamplingParams, mode: Mode) -> f64 {
    let (l, g, n) = (params.read_len, params.genome_len as f64, params.reads as f64);
    if ell + 1 >= l || params.reads == 0 {
        return 1.0;
    }
    let span = (l - ell - 1) as f64;
    let p = match mode {
        Mode::Exact => (n * (-span / g).ln_1p()).exp(),
        Mode::Approx => (-n * span / g).exp(),
    };
    clamp01(p)
}

/// Chance that a three-copy repeat with unbridged probability `p` per copy
/// ends up with some but not all copies bridged.
pub fn mixed_triple_probability(p: f64) -> f64 {
    3.0 * p * (1.0 - p) * (1.0 - p) + 3.0 * p * p * (1.0 - p)
}

/// Union bound on some listed triple repeat being mixed, one term per length entry.
pub fn p_triple_violation(params: &SamplingParams, triple_lengths: &[usize], mode: Mode) -> f64 {
    clamp01(triple_lengths.iter().map(|&l| mixed_triple_probability(p_unbridged(l, params, mode))).sum())
}

/// Union bound `G (1 - k/G)^N` on some window of `k` positions holding no read start.
pub fn p_not_k_covered(params: &SamplingParams, k: usize) -> f64 {
    let g = params.genome_len as f64;
    if k == 0 {
        return 1.0;
    }
    if k >= params.genome_len {
        return if params.reads == 0 { 1.0 } else { 0.0 };
    }
    clamp01(g * (params.reads as f64 * (-(k as f64) / g).ln_1p()).exp())
}

/// Largest gap between consecutive read starts that still gives both
/// k-covering and an overlap of at least `k` between neighbouring reads.
pub fn chain_window(k: usize, read_len: usize) -> usize {
    k.min(read_len.saturating_sub(k))
}

/// A pair of linked repeats, reduced to what the probability bound needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct LinkTerm {
    link_len: usize,
    first_len: usize,
    second_len: usize,
}

/// Repeat statistics of a genome, precomputed once for the probability bounds.
#[derive(Debug, Clone)]
pub struct RepeatStats {
    genome_len: usize,
    order: usize,
    /// Length of every maximal string occurring at least three times.
    triple_lengths: Vec<usize>,
    /// Ascending maximal-repeat copy lengths at each 0-based position.
    copy_lengths: Vec<Vec<usize>>,
    /// Linked pairs of repeats longer than `order`, one entry per unordered pair.
    links: Vec<LinkTerm>,
}

impl RepeatStats {
    /// Statistics for assembly order `k`.
    pub fn new(s: &CircularSequence, k: usize) -> Result<Self> {
        let g = s.len();
        if k == 0 || k > g {
            return invalid(format!("k = {k} outside 1..={g}"));
        }
        let index = CircularIndex::new(s);
        let triple_lengths = index.triples(1).iter().map(|t| t.len).collect();
        let copy_lengths = (1..=g).map(|p| index.copy_lengths(p)).collect();
        let long = index.maximal_pairs(k + 1);
        let mut seen = BTreeMap::new();
        for lp in find_linked_pairs(g, &long, k - 1, g)? {
            let key = if lp.first <= lp.second { (lp.first, lp.second) } else { (lp.second, lp.first) };
            let term = LinkTerm { link_len: lp.link_len, first_len: lp.first.len, second_len: lp.second.len };
            // the shortest link between two repeats is the one most likely to be in range
            seen.entry(key).and_modify(|t: &mut LinkTerm| *t = (*t).min(term)).or_insert(term);
        }
        let mut links: Vec<LinkTerm> = seen.into_values().collect();
        links.sort();
        Ok(RepeatStats { genome_len: g, order: k, triple_lengths, copy_lengths, links })
    }

    pub fn genome_len(&self) -> usize {
        self.genome_len
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn triple_lengths(&self) -> &[usize] {
        &self.triple_lengths
    }

    /// Number of triple repeats at each length.
    pub fn triple_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &l in &self.triple_lengths {
            *h.entry(l).or_insert(0) += 1;
        }
        h
    }

    fn check(&self, params: &SamplingParams) -> Result<()> {
        if params.genome_len != self.genome_len {
            return invalid(format!(
                "parameters are for G = {} but the statistics are for G = {}",
                params.genome_len, self.genome_len
            ));
        }
        Ok(())
    }

    /// Bound on the read placements violating the conditions that make the
    /// greedy graph sufficient: a mixed triple repeat, or two neighbouring
    /// reads more than [`chain_window`] apart.
    pub fn theorem1_failure(&self, params: &SamplingParams, mode: Mode) -> Result<f64> {
        self.check(params)?;
        let t = p_triple_violation(params, &self.triple_lengths, mode);
        let c = p_not_k_covered(params, chain_window(self.order, params.read_len));
        Ok(clamp01(t + c))
    }

    /// Bound on some repeat of length at most `q` not being doubly bridged,
    /// or some linked pair with link length in `[k - 1, q]` having neither
    /// repeat doubly bridged.
    ///
    /// All copies starting at one position are bridged whenever the longest
    /// of them is, so the first part sums one term per position.
    pub fn p_q_violation(&self, params: &SamplingParams, q: usize, mode: Mode) -> Result<f64> {
        self.check(params)?;
        if q < self.order {
            return invalid(format!("q = {q} is below k = {}", self.order));
        }
        let mut cache: BTreeMap<usize, f64> = BTreeMap::new();
        let mut p = |l: usize| *cache.entry(l).or_insert_with(|| p_unbridged(l, params, mode));
        let mut total = 0.0;
        for lens in &self.copy_lengths {
            let i = lens.partition_point(|&m| m <= q);
            if i > 0 {
                total += p(lens[i - 1]);
            }
        }
        for t in &self.links {
            if t.link_len > q || t.first_len <= q || t.second_len <= q {
                continue;
            }
            let loose = |pl: f64| 1.0 - (1.0 - pl) * (1.0 - pl);
            total += loose(p(t.first_len)) * loose(p(t.second_len));
        }
        Ok(clamp01(total))
    }

    pub fn report(&self, params: &SamplingParams, q: Option<usize>, mode: Mode) -> Result<ProbabilityReport> {
        self.check(params)?;
        let triple_terms: Vec<TripleTerm> = self
            .triple_histogram()
            .into_iter()
            .map(|(len, count)| {
                let p_ell = p_unbridged(len, params, mode);
                TripleTerm { len, count, p_ell, term: count as f64 * mixed_triple_probability(p_ell) }
            })
            .collect();
        let window = chain_window(self.order, params.read_len);
        Ok(ProbabilityReport {
            params: *params,
            mode,
            k: self.order,
            p_triple: p_triple_violation(params, &self.triple_lengths, mode),
            p_not_k_covered: p_not_k_covered(params, window),
            chain_window: window,
            theorem1_failure: self.theorem1_failure(params, mode)?,
            q,
            p_q: q.map(|q| self.p_q_violation(params, q, mode)).transpose()?,
            triple_terms,
        })
    }
}

/// Contribution of the triple repeats of one length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleTerm {
    pub len: usize,
    pub count: usize,
    pub p_ell: f64,
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub params: SamplingParams,
    pub mode: Mode,
    pub k: usize,
    pub p_triple: f64,
    pub p_not_k_covered: f64,
    /// Gap between read starts that the covering term is computed for.
    pub chain_window: usize,
    pub theorem1_failure: f64,
    pub q: Option<usize>,
    pub p_q: Option<f64>,
    pub triple_terms: Vec<TripleTerm>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, l: usize, g: usize) -> SamplingParams {
        SamplingParams::new(n, l, g, 7).unwrap()
    }

    #[test]
    fn sampling_is_seeded() {
        let s: CircularSequence = "ACGTTGCAAGCTAGGCTA".parse().unwrap();
        let p = params(20, 5, 18);
        let a = sample_reads(&s, &p).unwrap();
        assert_eq!(a, sample_reads(&s, &p).unwrap());
        assert_eq!(a.len(), 20);
        assert!(sample_reads(&s, &p.with_reads(0)).unwrap().is_empty());
        assert!(SamplingParams::new(1, 19, 18, 0).is_err());
        assert!(sample_reads(&s, &params(3, 5, 20)).is_err());
    }

    #[test]
    fn coverage_rounding() {
        assert_eq!(reads_for_coverage(2.5, 10, 10), 2);
        assert_eq!(reads_for_coverage(3.5, 10, 10), 4);
        let p = SamplingParams::from_coverage(30.0, 100, 10_000, 0).unwrap();
        assert_eq!(p.reads, 3000);
        assert!((p.coverage() - 30.0).abs() < 1e-12);
        assert!(SamplingParams::from_coverage(f64::NAN, 100, 10_000, 0).is_err());
    }

    #[test]
    fn unbridged_endpoints() {
        assert_eq!(p_unbridged(10, &params(0, 100, 1000), Mode::Exact), 1.0);
        assert_eq!(p_unbridged(100, &params(50, 100, 1000), Mode::Exact), 1.0);
        assert_eq!(p_unbridged(120, &params(50, 100, 1000), Mode::Approx), 1.0);
        let p = params(500, 100, 10_000);
        let exact = p_unbridged(50, &p, Mode::Exact);
        assert!((exact - (1.0f64 - 49.0 / 10_000.0).powi(500)).abs() < 1e-12);
        assert_eq!(p_unbridged(99, &p, Mode::Exact), 1.0);
        assert!(p_unbridged(98, &p, Mode::Exact) < 1.0);
        assert!(p_unbridged(50, &p, Mode::Approx) >= exact);
    }

    #[test]
    fn triple_term_endpoints() {
        let p = params(100, 50, 1000);
        assert_eq!(p_triple_violation(&p, &[], Mode::Exact), 0.0);
        assert_eq!(mixed_triple_probability(0.0), 0.0);
        assert_eq!(mixed_triple_probability(1.0), 0.0);
        assert!((mixed_triple_probability(0.5) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn covering_bound() {
        assert_eq!(p_not_k_covered(&params(0, 5, 100), 10), 1.0);
        assert_eq!(p_not_k_covered(&params(3, 5, 100), 100), 0.0);
        let b = p_not_k_covered(&params(300, 20, 200), 10);
        assert!((b - 200.0 * 0.95f64.powi(300)).abs() < 1e-12);
        assert_eq!(chain_window(6, 8), 2);
        assert_eq!(chain_window(3, 20), 3);
    }

    #[test]
    fn stats_on_repeat_free_sequence() {
        let s: CircularSequence = "ACGT".parse().unwrap();
        let stats = RepeatStats::new(&s, 1).unwrap();
        assert!(stats.triple_lengths().is_empty());
        assert_eq!(stats.p_q_violation(&params(1000, 4, 4), 2, Mode::Exact).unwrap(), 0.0);
        assert!(stats.p_q_violation(&params(10, 3, 4), 0, Mode::Exact).is_err());
        assert!(stats.theorem1_failure(&params(10, 3, 5), Mode::Exact).is_err());
    }
}
