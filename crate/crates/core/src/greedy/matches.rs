//! Exact repeated substrings among a set of reads.

use std::collections::{BTreeMap, BTreeSet};

use crate::repeats::suffix_array::SuffixArray;
use crate::seqcore::{LinearString, ReadSet, Symbol};

/// One occurrence of a candidate string inside a read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub read: usize,
    /// 0-based offset in the read.
    pub offset: usize,
    pub is_prefix: bool,
    pub is_suffix: bool,
}

/// A string occurring at least twice among the reads, at positions where the
/// occurrences cannot all be extended by the same symbol on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchCandidate {
    pub string: LinearString,
    pub occurrences: Vec<Occurrence>,
}

impl MatchCandidate {
    pub fn len(&self) -> usize {
        self.string.len()
    }

    pub fn is_empty(&self) -> bool {
        self.string.is_empty()
    }
}

/// Suffix array over the reads joined with distinct separators.
pub struct ReadIndex {
    sa: SuffixArray,
    read_len: usize,
    /// Text offset of read `i` is `i * (read_len + 1)`.
    stride: usize,
    text: Vec<u32>,
}

impl ReadIndex {
    pub fn new(reads: &ReadSet) -> Self {
        let read_len = reads.read_len();
        let stride = read_len + 1;
        let mut text = Vec::with_capacity(reads.len() * stride);
        for (i, r) in reads.reads().iter().enumerate() {
            text.extend(r.content.as_slice().iter().map(|&c| c as u32));
            text.push(4 + i as u32);
        }
        ReadIndex { sa: SuffixArray::new(&text), read_len, stride, text }
    }

    fn locate(&self, text_pos: usize) -> (usize, usize) {
        (text_pos / self.stride, text_pos % self.stride)
    }

    fn occurrence(&self, text_pos: usize, len: usize) -> Occurrence {
        let (read, offset) = self.locate(text_pos);
        Occurrence { read, offset, is_prefix: offset == 0, is_suffix: offset + len == self.read_len }
    }

    /// The suffix-array rank range of suffixes sharing the first `len`
    /// symbols of read `read` at `offset`.
    pub fn interval(&self, read: usize, offset: usize, len: usize) -> (usize, usize) {
        let r = self.sa.rank[read * self.stride + offset];
        let (mut lo, mut hi) = (r, r);
        while lo > 0 && self.sa.lcp[lo] >= len {
            lo -= 1;
        }
        while hi + 1 < self.sa.sa.len() && self.sa.lcp[hi + 1] >= len {
            hi += 1;
        }
        (lo, hi)
    }

    /// Every occurrence of the string starting at `offset` of `read` with
    /// length `len`, ordered by read then offset.
    pub fn occurrences_in(&self, interval: (usize, usize), len: usize) -> Vec<Occurrence> {
        let mut out: Vec<Occurrence> =
            (interval.0..=interval.1).map(|i| self.occurrence(self.sa.sa[i], len)).collect();
        out.sort_unstable();
        out
    }

    fn string_at(&self, text_pos: usize, len: usize) -> LinearString {
        LinearString::new(self.text[text_pos..text_pos + len].iter().map(|&c| Symbol::from_index(c as usize)).collect())
    }

    fn left_symbol(&self, text_pos: usize) -> Option<u32> {
        let (_, offset) = self.locate(text_pos);
        (offset > 0).then(|| self.text[text_pos - 1])
    }
}

/// Candidates of length at least `min_len`, longest first, then lexicographic.
pub fn find_match_candidates(reads: &ReadSet, min_len: usize) -> Vec<MatchCandidate> {
    if reads.is_empty() {
        return Vec::new();
    }
    let index = ReadIndex::new(reads);
    let n = index.sa.sa.len();
    let lcp = &index.sa.lcp;
    let mut out = Vec::new();
    // bottom-up traversal of lcp intervals
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    for i in 1..=n {
        let cur = if i < n { lcp[i] } else { 0 };
        let mut lb = i - 1;
        while cur < stack.last().unwrap().0 {
            let (v, l) = stack.pop().unwrap();
            let rb = i - 1;
            if v >= min_len.max(1) {
                let lefts: BTreeSet<Option<u32>> =
                    (l..=rb).map(|j| index.left_symbol(index.sa.sa[j])).collect();
                let left_maximal = lefts.len() > 1 || lefts.contains(&None);
                if left_maximal {
                    out.push(MatchCandidate {
                        string: index.string_at(index.sa.sa[l], v),
                        occurrences: index.occurrences_in((l, rb), v),
                    });
                }
            }
            lb = l;
        }
        if cur > stack.last().unwrap().0 {
            stack.push((cur, lb));
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.string.cmp(&b.string)));
    out
}

/// Quadratic enumeration of every substring, with the same output contract.
pub fn find_match_candidates_naive(reads: &ReadSet, min_len: usize) -> Vec<MatchCandidate> {
    let l = reads.read_len();
    let mut occ: BTreeMap<Vec<Symbol>, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, r) in reads.reads().iter().enumerate() {
        let c = r.content.as_slice();
        for a in 0..l {
            for b in a + min_len.max(1)..=l {
                occ.entry(c[a..b].to_vec()).or_default().push((i, a));
            }
        }
    }
    let symbol = |read: usize, pos: isize| -> Option<Symbol> {
        let c = reads.reads()[read].content.as_slice();
        (pos >= 0 && (pos as usize) < l).then(|| c[pos as usize])
    };
    let mut out = Vec::new();
    for (x, ps) in occ {
        if ps.len() < 2 {
            continue;
        }
        let len = x.len();
        let same = |f: &dyn Fn(usize, usize) -> Option<Symbol>| {
            let first = f(ps[0].0, ps[0].1);
            first.is_some() && ps.iter().all(|&(r, o)| f(r, o) == first)
        };
        let left_ext = same(&|r, o| symbol(r, o as isize - 1));
        let right_ext = same(&|r, o| symbol(r, (o + len) as isize));
        if left_ext || right_ext {
            continue;
        }
        let mut occurrences: Vec<Occurrence> = ps
            .iter()
            .map(|&(read, offset)| Occurrence { read, offset, is_prefix: offset == 0, is_suffix: offset + len == l })
            .collect();
        occurrences.sort_unstable();
        out.push(MatchCandidate { string: LinearString::new(x), occurrences });
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.string.cmp(&b.string)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn overlapping_reads() {
        let reads = ReadSet::from_strs(&["ACGGT", "CGGTA"]).unwrap();
        let c = find_match_candidates(&reads, 1);
        assert_eq!(c[0].string.to_string(), "CGGT");
        assert_eq!(c[0].occurrences.len(), 2);
        assert!(c[0].occurrences[0].is_suffix && c[0].occurrences[1].is_prefix);
    }

    #[test]
    fn disjoint_alphabets() {
        let reads = ReadSet::from_strs(&["AAAA", "CCCC"]).unwrap();
        let c = find_match_candidates(&reads, 1);
        // only self matches within each read
        for m in &c {
            let reads_hit: BTreeSet<usize> = m.occurrences.iter().map(|o| o.read).collect();
            assert_eq!(reads_hit.len(), 1);
        }
        assert_eq!(c, find_match_candidates_naive(&reads, 1));
    }

    #[test]
    fn suffix_array_matches_quadratic_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..50 {
            let l = rng.gen_range(3..12);
            let n = rng.gen_range(1..7);
            let alphabet = if trial % 2 == 0 { 2 } else { 4 };
            let texts: Vec<String> = (0..n)
                .map(|_| (0..l).map(|_| Symbol::from_index(rng.gen_range(0..alphabet)).to_char()).collect())
                .collect();
            let refs: Vec<&str> = texts.iter().map(|s| s.as_str()).collect();
            let reads = ReadSet::from_strs(&refs).unwrap();
            for k in [1, 2, 3] {
                assert_eq!(find_match_candidates(&reads, k), find_match_candidates_naive(&reads, k), "{texts:?}");
            }
        }
    }
}
