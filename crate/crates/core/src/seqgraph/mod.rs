//! Order-k sequence graphs.
//!
//! Nodes carry (k-1)-mer labels and edges carry k-mer labels, with the
//! endpoint labels matching the prefix and suffix of the edge label. Two
//! nodes may share a label. Node provenance records the genome positions a
//! node stands for: node `p` of a genome sits just before symbol `s[p]`, so
//! an edge leaving it spells `s[p..p+k-1]`.

pub mod text;

use std::collections::{BTreeMap, BTreeSet};

use crate::distortion::{EdgeClass, Multigraph};
use crate::error::{invalid, Error, Result};
use crate::repeats::{CircularIndex, RepeatPair};
use crate::seqcore::{CircularSequence, LinearString, Symbol};

/// A directed edge of a sequence graph with `mult` parallel copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: LinearString,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceGraph {
    order: usize,
    labels: Vec<LinearString>,
    edges: Vec<Edge>,
    provenance: Option<Vec<Vec<usize>>>,
}

impl SequenceGraph {
    /// Builds a graph, checking that every edge label agrees with its endpoints.
    pub fn new(
        order: usize,
        labels: Vec<LinearString>,
        edges: Vec<Edge>,
        provenance: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if order == 0 {
            return invalid("graph order must be positive");
        }
        if let Some(l) = labels.iter().find(|l| l.len() != order - 1) {
            return invalid(format!("node label {l} does not have length {}", order - 1));
        }
        if let Some(p) = &provenance {
            if p.len() != labels.len() {
                return invalid("provenance must list one position set per node");
            }
        }
        let g = SequenceGraph { order, labels, edges, provenance };
        for e in &g.edges {
            if e.src >= g.labels.len() || e.dst >= g.labels.len() {
                return invalid(format!("edge {} -> {} outside the node set", e.src, e.dst));
            }
            if !g.edge_is_consistent(e) {
                return invalid(format!("edge label {} disagrees with its endpoints", e.label));
            }
        }
        Ok(g)
    }

    fn edge_is_consistent(&self, e: &Edge) -> bool {
        let k = self.order;
        let l = e.label.as_slice();
        l.len() == k && self.labels[e.src].as_slice() == &l[..k - 1] && self.labels[e.dst].as_slice() == &l[1..]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, node: usize) -> &LinearString {
        &self.labels[node]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn provenance(&self) -> Option<&[Vec<usize>]> {
        self.provenance.as_deref()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.mult).sum()
    }

    /// Whether every edge agrees with its endpoint labels.
    pub fn is_label_consistent(&self) -> bool {
        self.edges.iter().all(|e| self.edge_is_consistent(e))
    }

    pub fn out_degree(&self, node: usize) -> u64 {
        self.edges.iter().filter(|e| e.src == node).map(|e| e.mult).sum()
    }

    pub fn in_degree(&self, node: usize) -> u64 {
        self.edges.iter().filter(|e| e.dst == node).map(|e| e.mult).sum()
    }

    /// Edge classes keyed by source, target and label.
    pub fn to_multigraph(&self) -> Multigraph {
        self.weighted_multigraph(|i| self.edges[i].mult)
    }

    fn weighted_multigraph(&self, weight: impl Fn(usize) -> u64) -> Multigraph {
        let mut classes: BTreeMap<(usize, usize, &LinearString), u64> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            *classes.entry((e.src, e.dst, &e.label)).or_default() += weight(i);
        }
        let classes = classes.into_iter().map(|((src, dst, _), mult)| EdgeClass { src, dst, mult }).collect();
        Multigraph::new(self.node_count(), classes).expect("edges reference existing nodes")
    }

    /// Quotient of the graph under a node partition. `class_of[v]` names the
    /// class of node `v`; classes are renumbered by their smallest member.
    /// Edges that coincide in source, target and label collapse into one.
    pub fn quotient(&self, class_of: &[usize]) -> Result<SequenceGraph> {
        let n = self.node_count();
        let mut rep_of_class: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            rep_of_class.entry(class_of[v]).and_modify(|r| *r = (*r).min(v)).or_insert(v);
        }
        let mut reps: Vec<usize> = rep_of_class.values().copied().collect();
        reps.sort_unstable();
        let mut new_id = vec![0usize; n];
        let id_of_rep: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        for v in 0..n {
            new_id[v] = id_of_rep[&rep_of_class[&class_of[v]]];
        }
        let mut labels: Vec<Option<LinearString>> = vec![None; reps.len()];
        for v in 0..n {
            match &labels[new_id[v]] {
                Some(l) if l != &self.labels[v] => {
                    return Err(Error::Internal(format!("merging nodes labelled {l} and {}", self.labels[v])))
                }
                Some(_) => {}
                None => labels[new_id[v]] = Some(self.labels[v].clone()),
            }
        }
        let provenance = self.provenance.as_ref().map(|prov| {
            let mut merged: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); reps.len()];
            for v in 0..n {
                merged[new_id[v]].extend(prov[v].iter().copied());
            }
            merged.into_iter().map(|s| s.into_iter().collect()).collect()
        });
        let mut edges: BTreeSet<(usize, usize, LinearString)> = BTreeSet::new();
        for e in &self.edges {
            edges.insert((new_id[e.src], new_id[e.dst], e.label.clone()));
        }
        Ok(SequenceGraph {
            order: self.order,
            labels: labels.into_iter().map(|l| l.unwrap()).collect(),
            edges: edges.into_iter().map(|(src, dst, label)| Edge { src, dst, label, mult: 1 }).collect(),
            provenance,
        })
    }

    /// Disjoint union of graphs of the same order.
    pub fn disjoint_union(parts: &[SequenceGraph]) -> Result<SequenceGraph> {
        let Some(first) = parts.first() else {
            return invalid("empty union");
        };
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut provenance = Some(Vec::new());
        for p in parts {
            if p.order != first.order {
                return invalid("graphs of different order");
            }
            let offset = labels.len();
            labels.extend(p.labels.iter().cloned());
            edges.extend(p.edges.iter().map(|e| Edge { src: e.src + offset, dst: e.dst + offset, ..e.clone() }));
            match (&mut provenance, &p.provenance) {
                (Some(acc), Some(pp)) => acc.extend(pp.iter().cloned()),
                _ => provenance = None,
            }
        }
        Ok(SequenceGraph { order: first.order, labels, edges, provenance })
    }
}

/// A walk given by its nodes and the edge taken between consecutive nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPath {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl GraphPath {
    /// Checks that consecutive edges join consecutive nodes.
    pub fn validate(&self, g: &SequenceGraph) -> Result<()> {
        if self.edges.len() + 1 != self.nodes.len() {
            return invalid("a path needs one edge between each pair of consecutive nodes");
        }
        for (i, &e) in self.edges.iter().enumerate() {
            let edge = g.edges.get(e).ok_or_else(|| Error::InvalidArgument(format!("no edge {e}")))?;
            if edge.src != self.nodes[i] || edge.dst != self.nodes[i + 1] {
                return invalid(format!("edge {e} does not join nodes {} and {}", self.nodes[i], self.nodes[i + 1]));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.nodes.len() > 1 && self.nodes.first() == self.nodes.last()
    }
}

/// The string spelled by a path: the first edge label followed by the last
/// symbol of each later edge.
pub fn spell_path(g: &SequenceGraph, p: &GraphPath) -> Result<LinearString> {
    if p.nodes.len() < 2 {
        return invalid("a path with a single node spells nothing");
    }
    p.validate(g)?;
    let mut out: Vec<Symbol> = g.edges[p.edges[0]].label.as_slice().to_vec();
    for &e in &p.edges[1..] {
        out.push(*g.edges[e].label.as_slice().last().unwrap());
    }
    Ok(LinearString::new(out))
}

/// Longest unambiguous paths into sink nodes and out of source nodes.
///
/// A suffix path is extended backwards from a node without outgoing edges as
/// long as the current node has exactly one incoming edge; every tail of it
/// is a graph suffix. Prefix paths are the mirror image.
pub fn graph_prefixes_suffixes(g: &SequenceGraph) -> (Vec<GraphPath>, Vec<GraphPath>) {
    let n = g.node_count();
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        outs[e.src].push(i);
        ins[e.dst].push(i);
    }
    let mut prefixes = Vec::new();
    let mut suffixes = Vec::new();
    for v in 0..n {
        if ins[v].is_empty() && !outs[v].is_empty() {
            let mut nodes = vec![v];
            let mut edges = Vec::new();
            let mut at = v;
            while outs[at].len() == 1 && nodes.len() <= n {
                let e = outs[at][0];
                edges.push(e);
                at = g.edges[e].dst;
                nodes.push(at);
            }
            prefixes.push(GraphPath { nodes, edges });
        }
        if outs[v].is_empty() && !ins[v].is_empty() {
            let mut nodes = vec![v];
            let mut edges = Vec::new();
            let mut at = v;
            while ins[at].len() == 1 && nodes.len() <= n {
                let e = ins[at][0];
                edges.push(e);
                at = g.edges[e].src;
                nodes.push(at);
            }
            nodes.reverse();
            edges.reverse();
            suffixes.push(GraphPath { nodes, edges });
        }
    }
    (prefixes, suffixes)
}

/// A closed walk through every edge, with the number of times each edge is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChinesePostmanCycle {
    pub path: GraphPath,
    pub counts: Vec<u64>,
}

/// A sequence graph with an edge multiplicity taken from a covering walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianizedGraph {
    pub graph: SequenceGraph,
    pub multiplicities: Vec<u64>,
}

impl EulerianizedGraph {
    pub fn to_multigraph(&self) -> Multigraph {
        self.graph.weighted_multigraph(|i| self.multiplicities[i])
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.iter().sum()
    }
}

/// Searches for a closed walk spelling `s` that visits, at step `p`, a node
/// whose provenance contains genome position `p`. Returns it when it also
/// covers every edge.
///
/// Walks are tried from each start node in increasing order, and each layer
/// keeps the first edge found into every node, so the result is deterministic.
pub fn check_sufficiency(g: &SequenceGraph, s: &CircularSequence) -> Result<Option<ChinesePostmanCycle>> {
    let Some(prov) = g.provenance.as_ref() else {
        return Err(Error::PreconditionViolation("sufficiency checking needs node provenance".into()));
    };
    let big_g = s.len();
    let k = g.order;
    if g.edges.is_empty() {
        return Ok(None);
    }
    let mut at_position: Vec<Vec<usize>> = vec![Vec::new(); big_g + 1];
    for (v, ps) in prov.iter().enumerate() {
        for &p in ps {
            if (1..=big_g).contains(&p) {
                at_position[p].push(v);
            }
        }
    }
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (i, e) in g.edges.iter().enumerate() {
        outs[e.src].push(i);
    }
    let spells_here = |e: &Edge, p: usize| e.label.as_slice().iter().enumerate().all(|(i, &c)| s.at0(p - 1 + i) == c);
    let mut starts = at_position[1].clone();
    starts.sort_unstable();
    for start in starts {
        // layer p holds (node, edge taken into it, index of predecessor in layer p-1)
        let mut layers: Vec<Vec<(usize, usize, usize)>> = vec![vec![(start, usize::MAX, usize::MAX)]];
        for p in 1..=big_g {
            let mut next: Vec<(usize, usize, usize)> = Vec::new();
            let mut seen = BTreeSet::new();
            for (idx, &(u, _, _)) in layers[p - 1].iter().enumerate() {
                for &e in &outs[u] {
                    let edge = &g.edges[e];
                    let target_ok = if p == big_g {
                        edge.dst == start
                    } else {
                        prov[edge.dst].binary_search(&(p + 1)).is_ok()
                    };
                    if target_ok && spells_here(edge, p) && seen.insert(edge.dst) {
                        next.push((edge.dst, e, idx));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        if layers.len() != big_g + 1 {
            continue;
        }
        let mut edges = Vec::with_capacity(big_g);
        let mut nodes = Vec::with_capacity(big_g + 1);
        let mut idx = 0;
        for p in (1..=big_g).rev() {
            let (v, e, pred) = layers[p][idx];
            nodes.push(v);
            edges.push(e);
            idx = pred;
        }
        nodes.push(start);
        nodes.reverse();
        edges.reverse();
        let mut counts = vec![0u64; g.edges.len()];
        for &e in &edges {
            counts[e] += 1;
        }
        if counts.iter().all(|&c| c > 0) {
            debug_assert!(k >= 1);
            return Ok(Some(ChinesePostmanCycle { path: GraphPath { nodes, edges }, counts }));
        }
    }
    Ok(None)
}

/// Assigns each edge the number of times the covering walk uses it.
pub fn eulerianize(g: &SequenceGraph, c: &ChinesePostmanCycle) -> Result<EulerianizedGraph> {
    c.path.validate(g)?;
    if !c.path.is_closed() {
        return invalid("walk is not closed");
    }
    let mut counts = vec![0u64; g.edges.len()];
    for &e in &c.path.edges {
        counts[e] += 1;
    }
    if counts != c.counts {
        return invalid("edge counts disagree with the walk");
    }
    if let Some(e) = counts.iter().position(|&x| x == 0) {
        return invalid(format!("walk misses edge {e}"));
    }
    Ok(EulerianizedGraph { graph: g.clone(), multiplicities: counts })
}

/// The k-mer graph of `s`: one node per distinct (k-1)-mer and one edge per
/// distinct k-mer, with multiplicity equal to its number of occurrences.
pub fn build_kmer_graph(s: &CircularSequence, k: usize) -> Result<SequenceGraph> {
    build_kmer_graph_indexed(&CircularIndex::new(s), k)
}

/// As [`build_kmer_graph`], reusing a prebuilt rotation index.
pub fn build_kmer_graph_indexed(index: &CircularIndex, k: usize) -> Result<SequenceGraph> {
    let s = index.sequence();
    let g = s.len();
    if k == 0 || k > g {
        return invalid(format!("k = {k} outside 1..={g}"));
    }
    let (node_of, node_first) = index.groups(k - 1);
    let (edge_of, edge_first) = index.groups(k);
    let labels: Vec<LinearString> =
        node_first.iter().map(|&p| circular_label(s, p, k - 1)).collect();
    let mut provenance: Vec<Vec<usize>> = vec![Vec::new(); labels.len()];
    let mut mult = vec![0u64; edge_first.len()];
    for p in 0..g {
        provenance[node_of[p]].push(p + 1);
        mult[edge_of[p]] += 1;
    }
    let edges = edge_first
        .iter()
        .zip(mult)
        .map(|(&p, m)| Edge {
            src: node_of[p],
            dst: node_of[(p + 1) % g],
            label: circular_label(s, p, k),
            mult: m,
        })
        .collect();
    Ok(SequenceGraph { order: k, labels, edges, provenance: Some(provenance) })
}

fn circular_label(s: &CircularSequence, start0: usize, len: usize) -> LinearString {
    LinearString::new((0..len).map(|i| s.at0(start0 + i)).collect())
}

/// One node per genome position and one edge per circular k-mer occurrence,
/// closed into a single cycle.
pub fn build_cycle_graph(s: &CircularSequence, k: usize) -> Result<SequenceGraph> {
    let g = s.len();
    if k == 0 || k > g {
        return invalid(format!("k = {k} outside 1..={g}"));
    }
    let labels = (0..g).map(|p| circular_label(s, p, k - 1)).collect();
    let edges = (0..g).map(|p| Edge { src: p, dst: (p + 1) % g, label: circular_label(s, p, k), mult: 1 }).collect();
    let provenance = (1..=g).map(|p| vec![p]).collect();
    Ok(SequenceGraph { order: k, labels, edges, provenance: Some(provenance) })
}

/// Minimal union-find over `0..n`.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the classes of `a` and `b`; returns false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    pub fn classes(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// Merges, for every repeat `(a, b, len)`, the nodes `a + t` and `b + t` for
/// `t` in `0..=len - k + 1`, i.e. the two paths of `len - k + 1` edges that
/// spell the copies. Requires the cycle graph of `s`.
pub fn contract_repeats(g: &SequenceGraph, repeats: &[RepeatPair]) -> Result<SequenceGraph> {
    let n = g.node_count();
    let k = g.order;
    let is_cycle = g.edges.len() == n
        && g.edges.iter().enumerate().all(|(i, e)| e.src == i && e.dst == (i + 1) % n);
    if !is_cycle {
        return invalid("contraction expects a cycle graph");
    }
    let mut uf = UnionFind::new(n);
    for r in repeats {
        if r.len < k {
            return invalid(format!("repeat of length {} is shorter than the order {k}", r.len));
        }
        if r.pos_a == 0 || r.pos_a > n || r.pos_b == 0 || r.pos_b > n {
            return invalid(format!("repeat copy outside 1..={n}"));
        }
        for t in 0..=r.len - k + 1 {
            let (a, b) = ((r.pos_a - 1 + t) % n, (r.pos_b - 1 + t) % n);
            if g.labels[a] != g.labels[b] {
                return Err(Error::Internal(format!("repeat at {} and {} has unequal copies", r.pos_a, r.pos_b)));
            }
            uf.union(a, b);
        }
    }
    g.quotient(&uf.classes())
}
