//! Greedy merging of read paths into an order-k sequence graph, and checks of
//! the read-placement conditions under which the result can spell the genome.
//!
//! Every read starts as its own path of `L - k + 2` nodes. For match lengths
//! `l = L, L-1, ..., k` the assembler collects the length-`l` prefixes of reads
//! whose first node still has no incoming edge and the length-`l` suffixes of
//! reads whose last node still has no outgoing edge, keeps those strings that
//! occur at least twice across all reads, and glues every occurrence of each
//! onto one canonical occurrence. Strings are handled in lexicographic order
//! within one length, and each is re-checked just before it is merged.

pub mod matches;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::repeats::{find_linked_pairs, CircularIndex, Placements, TripleClass};
use crate::seqcore::{CircularSequence, LinearString, ReadSet};
use crate::seqgraph::{Edge, SequenceGraph, UnionFind};

pub use matches::{find_match_candidates, find_match_candidates_naive, MatchCandidate, Occurrence};
use matches::ReadIndex;

/// Work done at one match length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub match_len: usize,
    /// Distinct strings eligible at the start of the iteration.
    pub candidates: usize,
    /// Strings actually merged.
    pub merged: usize,
    /// Node unions that joined two different classes.
    pub unions: usize,
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub graph: SequenceGraph,
    pub trace: Vec<TraceEntry>,
}

/// Node classes of the working graph, with whether any member has an
/// incoming or outgoing read edge.
struct WorkingGraph {
    uf: UnionFind,
    has_in: Vec<bool>,
    has_out: Vec<bool>,
    nodes_per_read: usize,
}

impl WorkingGraph {
    fn node(&self, read: usize, t: usize) -> usize {
        read * self.nodes_per_read + t
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.uf.find(a), self.uf.find(b));
        if !self.uf.union(ra, rb) {
            return false;
        }
        let root = self.uf.find(ra);
        let (i, o) = (self.has_in[ra] || self.has_in[rb], self.has_out[ra] || self.has_out[rb]);
        self.has_in[root] = i;
        self.has_out[root] = o;
        true
    }

    fn prefix_open(&mut self, read: usize) -> bool {
        let r = self.uf.find(self.node(read, 0));
        !self.has_in[r]
    }

    fn suffix_open(&mut self, read: usize) -> bool {
        let r = self.uf.find(self.node(read, self.nodes_per_read - 1));
        !self.has_out[r]
    }
}

/// The disjoint union of read paths, with provenance from read placements
/// when every read has them.
pub fn initial_graph(reads: &ReadSet, k: usize, genome_len: Option<usize>) -> Result<SequenceGraph> {
    let l = reads.read_len();
    if k == 0 || k > l {
        return invalid(format!("k = {k} outside 1..={l}"));
    }
    let per = l - k + 2;
    let mut labels = Vec::with_capacity(reads.len() * per);
    let mut edges = Vec::with_capacity(reads.len() * (per - 1));
    let placed = genome_len.is_some() && reads.reads().iter().all(|r| r.true_starts.is_some());
    let mut provenance = placed.then(Vec::new);
    for (i, r) in reads.reads().iter().enumerate() {
        let c = r.content.as_slice();
        for t in 0..per {
            labels.push(LinearString::from(&c[t..t + k - 1]));
            if let (Some(p), Some(g)) = (provenance.as_mut(), genome_len) {
                let mut ps: Vec<usize> =
                    r.true_starts.as_ref().unwrap().iter().map(|&s| (s - 1 + t) % g + 1).collect();
                ps.sort_unstable();
                ps.dedup();
                p.push(ps);
            }
        }
        for t in 0..per - 1 {
            edges.push(Edge { src: i * per + t, dst: i * per + t + 1, label: LinearString::from(&c[t..t + k]), mult: 1 });
        }
    }
    SequenceGraph::new(k, labels, edges, provenance)
}

/// Runs the greedy merger. `genome_len` enables provenance on the output
/// when reads carry their true start positions.
pub fn greedy_assemble(reads: &ReadSet, k: usize, genome_len: Option<usize>) -> Result<Assembly> {
    if reads.is_empty() {
        return invalid("no reads to assemble");
    }
    let l = reads.read_len();
    let initial = initial_graph(reads, k, genome_len)?;
    let per = l - k + 2;
    let n_nodes = reads.len() * per;
    let mut w = WorkingGraph {
        uf: UnionFind::new(n_nodes),
        has_in: (0..n_nodes).map(|v| v % per != 0).collect(),
        has_out: (0..n_nodes).map(|v| v % per != per - 1).collect(),
        nodes_per_read: per,
    };
    let index = ReadIndex::new(reads);
    let mut trace = Vec::new();
    for len in (k..=l).rev() {
        // candidate strings keyed by their suffix-array interval, which orders them lexicographically
        let mut x: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for read in 0..reads.len() {
            if w.prefix_open(read) {
                let iv = index.interval(read, 0, len);
                if iv.1 > iv.0 {
                    x.insert(iv, ());
                }
            }
            if w.suffix_open(read) {
                let iv = index.interval(read, l - len, len);
                if iv.1 > iv.0 {
                    x.insert(iv, ());
                }
            }
        }
        let mut entry = TraceEntry { match_len: len, candidates: x.len(), merged: 0, unions: 0 };
        for &iv in x.keys() {
            let occ = index.occurrences_in(iv, len);
            let still_current = occ
                .iter()
                .any(|o| (o.is_prefix && w.prefix_open(o.read)) || (o.is_suffix && w.suffix_open(o.read)));
            if !still_current {
                continue;
            }
            entry.merged += 1;
            let canon = occ[0];
            for o in &occ[1..] {
                for t in 0..=len - k + 1 {
                    let a = w.node(canon.read, canon.offset + t);
                    let b = w.node(o.read, o.offset + t);
                    if w.union(a, b) {
                        entry.unions += 1;
                    }
                }
            }
        }
        trace.push(entry);
    }
    let graph = initial.quotient(&w.uf.classes())?;
    Ok(Assembly { graph, trace })
}

/// Every circular window of `k` positions holds a read start.
pub fn k_covers(reads: &ReadSet, s: &CircularSequence, k: usize) -> Result<bool> {
    Ok(Placements::new(reads, s.len())?.k_covers(k))
}

/// Reads k-cover `s`, consecutive reads along `s` overlap by at least `k`
/// symbols, and no triple repeat has both bridged and unbridged copies.
///
/// The overlap requirement follows from k-covering whenever `L >= 2k`.
pub fn check_theorem1_conditions(s: &CircularSequence, reads: &ReadSet, k: usize) -> Result<bool> {
    let placements = Placements::new(reads, s.len())?;
    let index = CircularIndex::new(s);
    Ok(reads_chain(&placements, k) && no_mixed_triples(&placements, &index))
}

fn reads_chain(placements: &Placements, k: usize) -> bool {
    let l = placements.read_len();
    l > k && placements.k_covers(k) && placements.k_covers(l - k)
}

fn no_mixed_triples(placements: &Placements, index: &CircularIndex) -> bool {
    index.triples(1).iter().all(|t| placements.classify(t) != TripleClass::Mixed)
}

/// No mixed triple repeats, every repeat of length at most `q` doubly
/// bridged, and no linked pair with link length in `[k - 1, q]` where neither
/// repeat is doubly bridged.
pub fn check_theorem2_conditions(s: &CircularSequence, reads: &ReadSet, k: usize, q: usize) -> Result<bool> {
    if q < k {
        return invalid(format!("q = {q} is below k = {k}"));
    }
    let placements = Placements::new(reads, s.len())?;
    let index = CircularIndex::new(s);
    if !no_mixed_triples(&placements, &index) {
        return Ok(false);
    }
    let pairs = index.maximal_pairs(1);
    if pairs.iter().any(|r| r.len <= q && !placements.doubly_bridged(r)) {
        return Ok(false);
    }
    let loose: Vec<_> = pairs.into_iter().filter(|r| !placements.doubly_bridged(r)).collect();
    Ok(find_linked_pairs(s.len(), &loose, k.saturating_sub(1), q)?.is_empty())
}
