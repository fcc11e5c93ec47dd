//! Maximal repeats, triple repeats and linked repeat pairs of a known genome,
//! and their bridging status under a set of placed reads.
//!
//! Repeat enumeration runs on a suffix array of `s ⊕ s` restricted to the `G`
//! rotation starts, which captures repeats that wrap the origin. A diagonal
//! scan ([`find_maximal_repeats_naive`]) implements the same contract in
//! `O(G^2)` and is kept as a cross-check.
//!
//! Lengths are capped at `G - 1`. A copy of length `G - 1` cannot be extended
//! in either direction. When two rotations of `s` are identical (periodic
//! genomes) the pair "extends forever"; it is reported once, at positions
//! `(1, 1 + d)` with `d` the smaller offset, and flagged `capped`.
//!
//! A triple repeat is a string with at least three occurrences such that some
//! choice of three copies cannot be extended by one symbol to the left or to
//! the right while keeping all three equal. Each maximal string is reported
//! once, with every occurrence that belongs to such a non-extendable triple.

pub mod suffix_array;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::distortion;
use num_traits::One;
use crate::error::{invalid, Result};
use crate::seqcore::{CircularSequence, ReadSet};
use suffix_array::SuffixArray;

/// Two copies of a maximal repeat, `pos_a < pos_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RepeatPair {
    pub pos_a: usize,
    pub pos_b: usize,
    pub len: usize,
    /// The two rotations of `s` at these offsets agree everywhere.
    pub capped: bool,
}

impl RepeatPair {
    pub fn copies(&self) -> [usize; 2] {
        [self.pos_a, self.pos_b]
    }
}

/// A maximal string occurring at least three times.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TripleRepeat {
    /// Sorted 1-based occurrence positions, at least three.
    pub positions: Vec<usize>,
    pub len: usize,
}

/// Two repeats whose copies at `first_copy` and `second_copy` satisfy
/// `first_copy < second_copy <= first_copy + first.len + 1` (circularly).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LinkedPair {
    pub first: RepeatPair,
    pub second: RepeatPair,
    pub first_copy: usize,
    pub second_copy: usize,
    pub link_len: usize,
}

/// Bridging outcome of a triple repeat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TripleClass {
    AllBridged,
    AllUnbridged,
    Mixed,
}

/// Repeat statistics of one genome.
#[derive(Debug, Clone, Serialize)]
pub struct RepeatCatalog {
    pub genome_len: usize,
    pub min_len: usize,
    pub pairs: Vec<RepeatPair>,
    pub triples: Vec<TripleRepeat>,
}

impl RepeatCatalog {
    /// Catalog of all maximal pairs and triples of length at least `min_len`.
    pub fn build(s: &CircularSequence, min_len: usize) -> Self {
        let index = CircularIndex::new(s);
        RepeatCatalog {
            genome_len: s.len(),
            min_len,
            pairs: index.maximal_pairs(min_len.max(1)),
            triples: index.triples(min_len.max(1)),
        }
    }

    /// Lengths of the triple repeats, one entry per maximal string.
    pub fn triple_lengths(&self) -> Vec<usize> {
        self.triples.iter().map(|t| t.len).collect()
    }

    /// CSV rows `kind,positions,length,capped`; positions are `;`-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,positions,length,capped\n");
        for p in &self.pairs {
            out.push_str(&format!("pair,{};{},{},{}\n", p.pos_a, p.pos_b, p.len, p.capped));
        }
        for t in &self.triples {
            let pos: Vec<String> = t.positions.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("triple,{},{},false\n", pos.join(";"), t.len));
        }
        out
    }
}

/// Suffix array over the `G` rotations of a circular sequence.
pub struct CircularIndex<'a> {
    s: &'a CircularSequence,
    /// 0-based rotation starts in sorted order.
    order: Vec<usize>,
    /// `adj[i]`: common prefix of rotations `order[i-1]` and `order[i]`, capped at `G - 1`.
    adj: Vec<usize>,
    /// Uncapped version of `adj`, saturating at `2G - 1`.
    raw_adj: Vec<usize>,
    /// Inverse of `order`.
    rank: Vec<usize>,
}

impl<'a> CircularIndex<'a> {
    pub fn new(s: &'a CircularSequence) -> Self {
        let g = s.len();
        let text: Vec<u32> = (0..2 * g).map(|i| s.at0(i) as u32).collect();
        let sa = SuffixArray::new(&text);
        let cap = g.saturating_sub(1);
        let mut order = Vec::with_capacity(g);
        let mut adj = Vec::with_capacity(g);
        let mut raw_adj = Vec::with_capacity(g);
        let mut running = usize::MAX;
        for (i, &p) in sa.sa.iter().enumerate() {
            if i > 0 {
                running = running.min(sa.lcp[i]);
            }
            if p < g {
                let common = if order.is_empty() { 0 } else { running };
                adj.push(common.min(cap));
                raw_adj.push(common);
                order.push(p);
                running = usize::MAX;
            }
        }
        let mut rank = vec![0; g];
        for (i, &p) in order.iter().enumerate() {
            rank[p] = i;
        }
        CircularIndex { s, order, adj, raw_adj, rank }
    }

    fn g(&self) -> usize {
        self.s.len()
    }

    pub fn sequence(&self) -> &CircularSequence {
        self.s
    }

    /// Groups positions by the circular substring of length `len` starting
    /// there. Returns the group of every 0-based position and the smallest
    /// position of every group; groups are numbered in lexicographic order.
    pub fn groups(&self, len: usize) -> (Vec<usize>, Vec<usize>) {
        let g = self.g();
        let mut group = vec![0; g];
        let mut first: Vec<usize> = Vec::new();
        for (i, &p) in self.order.iter().enumerate() {
            // rotations that agree on G symbols agree forever
            if i == 0 || self.raw_adj[i] < len.min(g) {
                first.push(p);
            }
            let id = first.len() - 1;
            first[id] = first[id].min(p);
            group[p] = id;
        }
        (group, first)
    }

    fn left(&self, p: usize) -> u8 {
        self.s.at0(p + self.g() - 1) as u8
    }

    fn normalize(&self, i: usize, j: usize, len: usize) -> RepeatPair {
        RepeatPair { pos_a: i.min(j) + 1, pos_b: i.max(j) + 1, len, capped: false }
    }

    fn periodic(&self, i: usize, j: usize) -> RepeatPair {
        let g = self.g();
        let d = (j + g - i) % g;
        let e = d.min(g - d);
        RepeatPair { pos_a: 1, pos_b: 1 + e, len: g - 1, capped: true }
    }

    /// All maximal pairs of length at least `min_len`, sorted.
    pub fn maximal_pairs(&self, min_len: usize) -> Vec<RepeatPair> {
        let g = self.g();
        if g < 2 {
            return Vec::new();
        }
        let min_len = min_len.max(1);
        let n = self.order.len();
        let mut out = BTreeSet::new();
        let mut start = 0;
        for end in 1..=n {
            if end < n && self.adj[end] >= min_len {
                continue;
            }
            for a in start..end {
                let mut m = usize::MAX;
                for b in a + 1..end {
                    m = m.min(self.adj[b]);
                    let (i, j) = (self.order[a], self.order[b]);
                    let differ = self.left(i) != self.left(j);
                    if m >= g - 1 {
                        out.insert(if differ { self.normalize(i, j, g - 1) } else { self.periodic(i, j) });
                    } else if differ {
                        out.insert(self.normalize(i, j, m));
                    }
                }
            }
            start = end;
        }
        out.into_iter().collect()
    }

    /// Maximal triple repeats of length at least `min_len`, one per string.
    pub fn triples(&self, min_len: usize) -> Vec<TripleRepeat> {
        let g = self.g();
        if g < 3 {
            return Vec::new();
        }
        let n = self.order.len();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        for idx in 1..=n {
            let cur = if idx < n { self.adj[idx] } else { 0 };
            let mut lb = idx - 1;
            while cur < stack.last().unwrap().0 {
                let (v, l) = stack.pop().unwrap();
                if v >= min_len.max(1) && idx - l >= 3 {
                    if let Some(t) = self.triple_from_interval(v, l, idx - 1) {
                        out.push(t);
                    }
                }
                lb = l;
            }
            if cur > stack.last().unwrap().0 {
                stack.push((cur, lb));
            }
        }
        out.sort_by(|a, b| (a.positions[0], a.len).cmp(&(b.positions[0], b.len)));
        out
    }

    fn triple_from_interval(&self, v: usize, lb: usize, rb: usize) -> Option<TripleRepeat> {
        let capped = v >= self.g() - 1;
        let size = rb - lb + 1;
        let mut child = Vec::with_capacity(size);
        let mut c = 0usize;
        for idx in lb..=rb {
            if idx > lb && (capped || self.adj[idx] == v) {
                c += 1;
            }
            child.push(c);
        }
        let lefts: Vec<usize> = (lb..=rb)
            .enumerate()
            .map(|(k, idx)| if capped { 4 + k } else { self.left(self.order[idx]) as usize })
            .collect();
        let mut per_child = std::collections::HashMap::<usize, usize>::new();
        let mut per_left = std::collections::HashMap::<usize, usize>::new();
        let mut per_both = std::collections::HashMap::<(usize, usize), usize>::new();
        for k in 0..size {
            *per_child.entry(child[k]).or_default() += 1;
            *per_left.entry(lefts[k]).or_default() += 1;
            *per_both.entry((child[k], lefts[k])).or_default() += 1;
        }
        let c2 = |x: usize| x * x.saturating_sub(1) / 2;
        let total = c2(size - 1);
        let mut positions: Vec<usize> = (0..size)
            .filter(|&k| {
                let sc = per_child[&child[k]] - 1;
                let sa = per_left[&lefts[k]] - 1;
                let sca = per_both[&(child[k], lefts[k])] - 1;
                total > c2(sc) + c2(sa) - c2(sca)
            })
            .map(|k| self.order[lb + k] + 1)
            .collect();
        if positions.len() < 3 {
            return None;
        }
        positions.sort_unstable();
        Some(TripleRepeat { positions, len: v.min(self.g() - 1) })
    }

    /// Distinct lengths of the maximal-repeat copies starting at `pos`
    /// (1-based), ascending.
    pub fn copy_lengths(&self, pos: usize) -> Vec<usize> {
        let g = self.g();
        let p = pos - 1;
        let r = self.rank[p];
        let mut out = Vec::new();
        let mut visit = |m: usize, j: usize| {
            let m = m.min(g - 1);
            if self.left(p) != self.left(j) || m == g - 1 {
                out.push(m);
            }
        };
        let mut m = usize::MAX;
        for idx in (0..r).rev() {
            m = m.min(self.adj[idx + 1]);
            if m == 0 {
                break;
            }
            visit(m, self.order[idx]);
        }
        m = usize::MAX;
        for idx in r + 1..self.order.len() {
            m = m.min(self.adj[idx]);
            if m == 0 {
                break;
            }
            visit(m, self.order[idx]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Length of the longest maximal-repeat copy starting at `pos` (1-based)
    /// whose length is at most `max_len`, if any.
    pub fn longest_copy_at_most(&self, pos: usize, max_len: usize) -> Option<usize> {
        self.copy_lengths(pos).into_iter().take_while(|&m| m <= max_len).last()
    }
}

/// Every maximal repeated pair of `s`.
pub fn find_maximal_repeats(s: &CircularSequence) -> Vec<RepeatPair> {
    CircularIndex::new(s).maximal_pairs(1)
}

/// Quadratic diagonal scan with the same contract as [`find_maximal_repeats`].
pub fn find_maximal_repeats_naive(s: &CircularSequence, min_len: usize) -> Vec<RepeatPair> {
    let g = s.len();
    let mut out = BTreeSet::new();
    for d in 1..=g / 2 {
        let starts = if 2 * d == g { d } else { g };
        let mut all_match = true;
        for t in 0..starts {
            let (i, j) = (t, (t + d) % g);
            if s.at0(i) != s.at0(j) {
                all_match = false;
                continue;
            }
            if s.at0(i + g - 1) == s.at0(j + g - 1) {
                continue;
            }
            let mut len = 1;
            while len < g - 1 && s.at0(i + len) == s.at0(j + len) {
                len += 1;
            }
            if len >= min_len {
                out.insert(RepeatPair { pos_a: i.min(j) + 1, pos_b: i.max(j) + 1, len, capped: false });
            }
        }
        if all_match && g > min_len {
            out.insert(RepeatPair { pos_a: 1, pos_b: 1 + d, len: g - 1, capped: true });
        }
    }
    out.into_iter().collect()
}

/// Every maximal triple repeat of `s`, one entry per string.
pub fn find_triple_repeats(s: &CircularSequence) -> Vec<TripleRepeat> {
    CircularIndex::new(s).triples(1)
}

/// Ordered pairs of catalog repeats with link length in `[min_link, max_link]`.
pub fn find_linked_pairs(
    genome_len: usize,
    repeats: &[RepeatPair],
    min_link: usize,
    max_link: usize,
) -> Result<Vec<LinkedPair>> {
    if min_link > max_link {
        return invalid(format!("empty link window [{min_link}, {max_link}]"));
    }
    let g = genome_len;
    let mut by_start: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g + 1];
    for (idx, r) in repeats.iter().enumerate() {
        for c in r.copies() {
            by_start[c].push((idx, c));
        }
    }
    let mut out = Vec::new();
    for (ai, a) in repeats.iter().enumerate() {
        // link = len + 1 - d with d = second_copy - first_copy in [1, len + 1]
        let d_hi = (a.len + 1).saturating_sub(min_link).min(a.len + 1);
        let d_lo = (a.len + 1).saturating_sub(max_link).max(1);
        if d_lo > d_hi {
            continue;
        }
        for a2 in a.copies() {
            for d in d_lo..=d_hi.min(g.saturating_sub(1)) {
                let b1 = (a2 - 1 + d) % g + 1;
                for &(bi, copy) in &by_start[b1] {
                    if bi != ai {
                        out.push(LinkedPair {
                            first: *a,
                            second: repeats[bi],
                            first_copy: a2,
                            second_copy: copy,
                            link_len: a.len + 1 - d,
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Read starts of a placed read set, indexed for bridging queries.
#[derive(Debug, Clone)]
pub struct Placements {
    starts: Vec<usize>,
    read_len: usize,
    genome_len: usize,
}

impl Placements {
    pub fn new(reads: &ReadSet, genome_len: usize) -> Result<Self> {
        let starts = reads.all_starts()?;
        Ok(Placements::from_starts(starts, reads.read_len(), genome_len))
    }

    pub fn from_starts(mut starts: Vec<usize>, read_len: usize, genome_len: usize) -> Self {
        starts.sort_unstable();
        starts.dedup();
        Placements { starts, read_len, genome_len }
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    /// Whether some start falls in the circular window of `width` positions
    /// ending at `last` (1-based).
    fn any_start_in_window(&self, last: usize, width: usize) -> bool {
        if width == 0 || self.starts.is_empty() {
            return false;
        }
        let g = self.genome_len;
        if width >= g {
            return true;
        }
        let first = (last + g - width) % g + 1;
        let in_range = |lo: usize, hi: usize| {
            let i = self.starts.partition_point(|&x| x < lo);
            i < self.starts.len() && self.starts[i] <= hi
        };
        if first <= last {
            in_range(first, last)
        } else {
            in_range(first, g) || in_range(1, last)
        }
    }

    /// A copy at `copy_pos` of length `copy_len` is bridged iff some read covers
    /// `copy_pos - 1 ..= copy_pos + copy_len`.
    pub fn is_bridged(&self, copy_pos: usize, copy_len: usize) -> bool {
        if copy_len + 2 > self.read_len || copy_len + 2 > self.genome_len {
            return false;
        }
        let g = self.genome_len;
        let last = (copy_pos + g - 2) % g + 1;
        self.any_start_in_window(last, self.read_len - copy_len - 1)
    }

    /// Every circular window of `k` positions contains a read start.
    pub fn k_covers(&self, k: usize) -> bool {
        let g = self.genome_len;
        if self.starts.is_empty() || k == 0 {
            return false;
        }
        if k >= g {
            return true;
        }
        let n = self.starts.len();
        (0..n).all(|i| {
            let next = if i + 1 < n { self.starts[i + 1] } else { self.starts[0] + g };
            next - self.starts[i] <= k
        })
    }

    pub fn classify(&self, t: &TripleRepeat) -> TripleClass {
        let bridged = t.positions.iter().filter(|&&p| self.is_bridged(p, t.len)).count();
        if bridged == t.positions.len() {
            TripleClass::AllBridged
        } else if bridged == 0 {
            TripleClass::AllUnbridged
        } else {
            TripleClass::Mixed
        }
    }

    pub fn doubly_bridged(&self, r: &RepeatPair) -> bool {
        self.is_bridged(r.pos_a, r.len) && self.is_bridged(r.pos_b, r.len)
    }
}

/// Whether the copy at `copy_pos` of length `copy_len` is bridged by `reads`.
pub fn bridging_status(copy_pos: usize, copy_len: usize, reads: &ReadSet, genome_len: usize) -> Result<bool> {
    Ok(Placements::new(reads, genome_len)?.is_bridged(copy_pos, copy_len))
}

pub fn classify_triple(t: &TripleRepeat, reads: &ReadSet, genome_len: usize) -> Result<TripleClass> {
    Ok(Placements::new(reads, genome_len)?.classify(t))
}

/// Smallest `k` for which the k-mer graph of `s` has a unique Eulerian cycle.
///
/// The number of sequences sharing the k-mer composition of `s` can only
/// shrink as `k` grows, so the search is a bisection over `1..=G`.
pub fn critical_read_length(s: &CircularSequence) -> usize {
    let (mut lo, mut hi) = (1, s.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let unique = distortion::kmer_graph_cycle_count(s, mid).map(|c| c.is_one()).unwrap_or(false);
        if unique {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::Symbol;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn cs(s: &str) -> CircularSequence {
        s.parse().unwrap()
    }

    fn random_genome(rng: &mut ChaCha8Rng, g: usize, alphabet: usize) -> CircularSequence {
        CircularSequence::new((0..g).map(|_| Symbol::from_index(rng.gen_range(0..alphabet))).collect()).unwrap()
    }

    /// Exhaustive oracle: every position pair and every length, then the maximality filter.
    fn pairs_oracle(s: &CircularSequence) -> Vec<RepeatPair> {
        let g = s.len();
        let mut out = BTreeSet::new();
        for t1 in 0..g {
            for t2 in t1 + 1..g {
                let full = (0..g).all(|i| s.at0(t1 + i) == s.at0(t2 + i));
                if full {
                    let d = t2 - t1;
                    out.insert(RepeatPair { pos_a: 1, pos_b: 1 + d.min(g - d), len: g - 1, capped: true });
                    continue;
                }
                for len in 1..g {
                    let equal = (0..len).all(|i| s.at0(t1 + i) == s.at0(t2 + i));
                    if !equal {
                        break;
                    }
                    let left_max = len == g - 1 || s.at0(t1 + g - 1) != s.at0(t2 + g - 1);
                    let right_max = len == g - 1 || s.at0(t1 + len) != s.at0(t2 + len);
                    if left_max && right_max {
                        out.insert(RepeatPair { pos_a: t1 + 1, pos_b: t2 + 1, len, capped: false });
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Exhaustive oracle over all strings and all position triples.
    fn triples_oracle(s: &CircularSequence) -> Vec<TripleRepeat> {
        let g = s.len();
        let mut by_string: BTreeMap<Vec<Symbol>, BTreeSet<usize>> = BTreeMap::new();
        for len in 1..g {
            let mut occ: BTreeMap<Vec<Symbol>, Vec<usize>> = BTreeMap::new();
            for t in 0..g {
                occ.entry((0..len).map(|i| s.at0(t + i)).collect()).or_default().push(t);
            }
            for (x, ps) in occ {
                if ps.len() < 3 {
                    continue;
                }
                for a in 0..ps.len() {
                    for b in a + 1..ps.len() {
                        for c in b + 1..ps.len() {
                            let tr = [ps[a], ps[b], ps[c]];
                            let ext = |off: usize| {
                                let v: Vec<Symbol> = tr.iter().map(|&t| s.at0(t + off)).collect();
                                v[0] == v[1] && v[1] == v[2]
                            };
                            let extendable = len < g - 1 && (ext(len) || ext(g - 1));
                            if !extendable {
                                by_string.entry(x.clone()).or_default().extend(tr.iter().map(|t| t + 1));
                            }
                        }
                    }
                }
            }
        }
        let mut out: Vec<TripleRepeat> = by_string
            .into_iter()
            .map(|(x, ps)| TripleRepeat { positions: ps.into_iter().collect(), len: x.len() })
            .collect();
        out.sort_by(|a, b| (a.positions[0], a.len).cmp(&(b.positions[0], b.len)));
        out
    }

    #[test]
    fn worked_example_pairs() {
        let s = cs("GGTCCAGTCGGTTCAA");
        let pairs = find_maximal_repeats(&s);
        assert!(pairs.contains(&RepeatPair { pos_a: 1, pos_b: 10, len: 3, capped: false }), "{pairs:?}");
        assert!(pairs.iter().any(|p| p.pos_a == 8 && p.pos_b == 13 && p.len >= 2), "{pairs:?}");
        for p in &pairs {
            assert_eq!(s.circular_substring(p.pos_a, p.len).unwrap(), s.circular_substring(p.pos_b, p.len).unwrap());
        }
    }

    #[test]
    fn distinct_symbols_have_no_repeats() {
        assert!(find_maximal_repeats(&cs("ACGT")).is_empty());
        assert!(find_triple_repeats(&cs("ACGT")).is_empty());
    }

    #[test]
    fn periodic_repeat_is_capped_once() {
        let pairs = find_maximal_repeats(&cs("AGTAGT"));
        let capped: Vec<_> = pairs.iter().filter(|p| p.capped).collect();
        assert_eq!(capped, vec![&RepeatPair { pos_a: 1, pos_b: 4, len: 5, capped: true }]);
        assert_eq!(pairs, pairs_oracle(&cs("AGTAGT")));
    }

    #[test]
    fn pairs_match_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..150 {
            let g = rng.gen_range(2..=30);
            let s = random_genome(&mut rng, g, if trial % 3 == 0 { 2 } else { 4 });
            let expected = pairs_oracle(&s);
            assert_eq!(find_maximal_repeats(&s), expected, "{s}");
            assert_eq!(find_maximal_repeats_naive(&s, 1), expected, "{s}");
            for p in &expected {
                let g = g as i64;
                let (a, b, l) = (p.pos_a as i64, p.pos_b as i64, p.len as i64);
                if !p.capped && l < g - 1 {
                    assert_ne!(s.at(a - 1), s.at(b - 1));
                    assert_ne!(s.at(a + l), s.at(b + l));
                }
            }
        }
    }

    #[test]
    fn min_len_filters_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_genome(&mut rng, 400, 4);
        let index = CircularIndex::new(&s);
        let all = index.maximal_pairs(1);
        let long: Vec<_> = all.iter().copied().filter(|p| p.len >= 5).collect();
        assert_eq!(index.maximal_pairs(5), long);
        assert_eq!(find_maximal_repeats_naive(&s, 5), long);
    }

    #[test]
    fn triples_match_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..60 {
            let g = if trial < 10 { 60 } else { rng.gen_range(3..=24) };
            let s = random_genome(&mut rng, g, if trial % 2 == 0 { 2 } else { 4 });
            assert_eq!(find_triple_repeats(&s), triples_oracle(&s), "{s}");
        }
        for text in ["AAAAAA", "ACACAC", "AAAAAAC", "ACGACGACGT"] {
            assert_eq!(find_triple_repeats(&cs(text)), triples_oracle(&cs(text)), "{text}");
        }
    }

    #[test]
    fn single_symbol_triple() {
        // A at three positions with distinct neighbours on each side
        let s = cs("CAGTAGGACTT");
        let t = find_triple_repeats(&s);
        assert!(t.contains(&TripleRepeat { positions: vec![2, 5, 8], len: 1 }), "{t:?}");
    }

    #[test]
    fn linked_pair_formula_and_boundary() {
        let a = RepeatPair { pos_a: 3, pos_b: 10, len: 5, capped: false };
        let b = RepeatPair { pos_a: 12, pos_b: 40, len: 4, capped: false };
        let links = find_linked_pairs(100, &[a, b], 0, 100).unwrap();
        assert!(links.iter().any(|l| l.first == a && l.first_copy == 10 && l.second_copy == 12 && l.link_len == 4));
        let far = RepeatPair { pos_a: 17, pos_b: 60, len: 4, capped: false };
        let links = find_linked_pairs(100, &[a, far], 0, 100).unwrap();
        assert!(!links.iter().any(|l| l.first == a && l.first_copy == 10 && l.second_copy == 17));
        assert!(find_linked_pairs(100, &[a], 3, 2).is_err());
    }

    #[test]
    fn linked_pairs_match_quadratic_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = random_genome(&mut rng, 100, 4);
        let reps = find_maximal_repeats(&s);
        let fast = find_linked_pairs(100, &reps, 2, 10).unwrap();
        let mut slow = Vec::new();
        for a in &reps {
            for b in &reps {
                if a == b {
                    continue;
                }
                for a2 in a.copies() {
                    for b1 in b.copies() {
                        let d = (b1 + 100 - a2) % 100;
                        if d >= 1 && d <= a.len + 1 {
                            let link = a.len + 1 - d;
                            if (2..=10).contains(&link) {
                                slow.push(LinkedPair { first: *a, second: *b, first_copy: a2, second_copy: b1, link_len: link });
                            }
                        }
                    }
                }
            }
        }
        slow.sort();
        slow.dedup();
        assert_eq!(fast, slow);
    }

    #[test]
    fn bridging_examples() {
        let s = cs(&"ACGT".repeat(5));
        let reads = ReadSet::from_starts(&s, 6, &[4]).unwrap();
        // read covers 4..9, copy occupies 5..7
        let p = Placements::from_starts(vec![4], 6, 20);
        assert!(p.is_bridged(5, 3));
        assert!(p.is_bridged(5, 4));
        assert!(!p.is_bridged(5, 5));
        assert!(!p.is_bridged(4, 4));
        let short = Placements::from_starts((1..=20).collect(), 4, 20);
        assert!(!short.is_bridged(5, 3));
        assert!(bridging_status(5, 1, &ReadSet::from_strs(&["ACG"]).unwrap(), 20).is_err());
        assert!(reads.all_starts().is_ok());
    }

    #[test]
    fn bridging_wraps_the_origin() {
        let p = Placements::from_starts(vec![19], 6, 20);
        // read covers 19, 20, 1, 2, 3, 4
        assert!(p.is_bridged(20, 4));
        assert!(!p.is_bridged(20, 5));
        assert!(!p.is_bridged(19, 3));
        assert!(p.is_bridged(1, 2));
    }

    #[test]
    fn triple_classification() {
        let t = TripleRepeat { positions: vec![10, 40, 70], len: 3 };
        let all = Placements::from_starts(vec![8, 38, 68], 7, 100);
        assert_eq!(all.classify(&t), TripleClass::AllBridged);
        let none = Placements::from_starts(vec![], 7, 100);
        assert_eq!(none.classify(&t), TripleClass::AllUnbridged);
        let one = Placements::from_starts(vec![8], 7, 100);
        assert_eq!(one.classify(&t), TripleClass::Mixed);
    }

    #[test]
    fn bridging_never_reported_for_long_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let starts: Vec<usize> = (0..30).map(|_| rng.gen_range(1..=50)).collect();
            let l = rng.gen_range(3..12);
            let p = Placements::from_starts(starts, l, 50);
            let pos = rng.gen_range(1..=50);
            for len in l - 1..l + 3 {
                assert!(!p.is_bridged(pos, len));
            }
        }
    }

    #[test]
    fn bridging_matches_direct_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let g = rng.gen_range(10..40);
            let l = rng.gen_range(3..10);
            let starts: Vec<usize> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(1..=g)).collect();
            let p = Placements::from_starts(starts.clone(), l, g);
            let pos = rng.gen_range(1..=g);
            let len = rng.gen_range(1..l);
            let direct = len + 2 <= g
                && starts.iter().any(|&t0| {
                    let off = (pos + 2 * g - 1 - t0) % g;
                    off + len + 2 <= l
                });
            assert_eq!(p.is_bridged(pos, len), direct);
        }
    }

    #[test]
    fn k_cover_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let g = rng.gen_range(5..40);
            let k = rng.gen_range(1..g + 2);
            let starts: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(1..=g)).collect();
            let p = Placements::from_starts(starts.clone(), 5, g);
            let direct = !starts.is_empty()
                && (1..=g).all(|t| (0..k.min(g)).any(|i| starts.contains(&((t - 1 + i) % g + 1))));
            assert_eq!(p.k_covers(k), direct, "g={g} k={k} {starts:?}");
        }
    }

    #[test]
    fn longest_copy_matches_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let g = rng.gen_range(20..80);
            let s = random_genome(&mut rng, g, 3);
            let index = CircularIndex::new(&s);
            let pairs = index.maximal_pairs(1);
            for q in [1, 2, 4, 8] {
                for pos in 1..=g {
                    let expected = pairs
                        .iter()
                        .filter(|p| !p.capped && p.len <= q && (p.pos_a == pos || p.pos_b == pos))
                        .map(|p| p.len)
                        .max();
                    assert_eq!(index.longest_copy_at_most(pos, q), expected, "{s} pos={pos} q={q}");
                }
            }
        }
    }

    /// Brute force: smallest k such that exactly one circular sequence (up to rotation)
    /// shares the k-mer composition of `s`.
    fn brute_critical(s: &CircularSequence) -> usize {
        let g = s.len();
        for k in 1..=g {
            let target = crate::seqcore::lmer_composition(s, k).unwrap();
            let mut classes = BTreeSet::new();
            for code in 0..4usize.pow(g as u32) {
                let x = CircularSequence::new((0..g).map(|i| Symbol::from_index(code >> (2 * i))).collect()).unwrap();
                if crate::seqcore::lmer_composition(&x, k).unwrap() == target {
                    classes.insert(x.canonical_rotation());
                }
            }
            if classes.len() == 1 {
                return k;
            }
        }
        g
    }

    #[test]
    fn critical_read_length_examples() {
        // four distinct 1-mers still admit 3! orders around the circle
        assert_eq!(critical_read_length(&cs("ACGT")), 2);
        assert_eq!(brute_critical(&cs("ACGT")), 2);
        let s = cs("CAGAGTT");
        assert_eq!(critical_read_length(&s), brute_critical(&s));
        assert_eq!(critical_read_length(&s), 2);
    }

    #[test]
    fn critical_read_length_is_a_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let s = random_genome(&mut rng, 60, 2);
            let k = critical_read_length(&s);
            assert!(k <= 60);
            for kk in [k, k + 1, k + 5] {
                if kk <= 60 {
                    assert!(distortion::kmer_graph_cycle_count(&s, kk).unwrap().is_one());
                }
            }
            if k > 1 {
                assert!(!distortion::kmer_graph_cycle_count(&s, k - 1).unwrap().is_one());
            }
        }
    }
}
