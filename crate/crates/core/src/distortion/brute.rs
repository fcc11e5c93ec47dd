//! Exhaustive enumeration oracles for small multigraphs.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::{EdgeClass, Multigraph};
use crate::error::{Error, Result};
use crate::seqcore::least_rotation;

pub const DEFAULT_MAX_EDGES: u64 = 16;

/// Eulerian circuits counted two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceCount {
    /// Every parallel edge distinguishable.
    pub raw: BigUint,
    /// Circuits identified when they visit the same classes in the same cyclic order.
    pub classes: BigUint,
}

/// Enumerates every Eulerian circuit by backtracking.
pub fn brute_force_eulerian(g: &Multigraph, max_edges: u64) -> Result<BruteForceCount> {
    let total = g.total_edges();
    if total > max_edges {
        return Err(Error::ResourceLimit(format!("{total} edges exceed the enumeration bound {max_edges}")));
    }
    g.require_eulerian()?;
    let classes = g.classes();
    let first = 0usize;
    let mut remaining: Vec<u64> = classes.iter().map(|c| c.mult).collect();
    remaining[first] -= 1;
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (i, c) in classes.iter().enumerate() {
        out_of[c.src].push(i);
    }
    let mut word = vec![first];
    let mut words = 0u64;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    extend(
        &Search { classes, out_of: &out_of, start: classes[first].src, total: total as usize },
        classes[first].dst,
        &mut remaining,
        &mut word,
        &mut words,
        &mut seen,
    );
    // fix the first copy of the first class at the front, then label the rest
    let mut raw = BigUint::from(words);
    for (i, c) in classes.iter().enumerate() {
        let m = if i == first { c.mult - 1 } else { c.mult };
        for f in 2..=m {
            raw *= f;
        }
    }
    Ok(BruteForceCount { raw, classes: BigUint::from(seen.len()) })
}

struct Search<'a> {
    classes: &'a [super::EdgeClass],
    out_of: &'a [Vec<usize>],
    start: usize,
    total: usize,
}

fn extend(
    s: &Search,
    at: usize,
    remaining: &mut [u64],
    word: &mut Vec<usize>,
    words: &mut u64,
    seen: &mut HashSet<Vec<usize>>,
) {
    if word.len() == s.total {
        if at == s.start {
            *words += 1;
            let r = least_rotation(word);
            let mut canon = word[r..].to_vec();
            canon.extend_from_slice(&word[..r]);
            seen.insert(canon);
        }
        return;
    }
    for &c in &s.out_of[at] {
        if remaining[c] == 0 {
            continue;
        }
        remaining[c] -= 1;
        word.push(c);
        extend(s, s.classes[c].dst, remaining, word, words, seen);
        word.pop();
        remaining[c] += 1;
    }
}

/// Every Eulerian multigraph on `1..=max_nodes` nodes with total multiplicity
/// at most `max_edges`, one class per ordered node pair, with no isolated node.
/// Graphs differing only by a node relabelling are all included.
pub fn all_eulerian_multigraphs(max_nodes: usize, max_edges: u64) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut mult = vec![0u64; cells.len()];
        fill(&cells, 0, max_edges, &mut mult, n, &mut out);
    }
    out
}

fn fill(cells: &[(usize, usize)], at: usize, budget: u64, mult: &mut [u64], n: usize, out: &mut Vec<Multigraph>) {
    if at == cells.len() {
        let classes: Vec<EdgeClass> = cells
            .iter()
            .zip(mult.iter())
            .filter(|(_, &m)| m > 0)
            .map(|(&(src, dst), &m)| EdgeClass { src, dst, mult: m })
            .collect();
        let mut used = vec![false; n];
        for c in &classes {
            used[c.src] = true;
            used[c.dst] = true;
        }
        if used.iter().all(|&u| u) {
            let g = Multigraph::new(n, classes).expect("cells are in range");
            if g.is_eulerian() {
                out.push(g);
            }
        }
        return;
    }
    for m in 0..=budget {
        mult[at] = m;
        fill(cells, at + 1, budget - m, mult, n, out);
    }
    mult[at] = 0;
}

/// A random Eulerian multigraph: the edges of a random closed walk of
/// `2..=max_edges` steps over at most `max_nodes` nodes, merged by node pair.
pub fn random_eulerian_multigraph<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize) -> Multigraph {
    let len = rng.gen_range(2..=max_edges.max(2));
    let n = rng.gen_range(1..=max_nodes.max(1));
    let walk: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
    let mut ids = vec![usize::MAX; n];
    let mut next_id = 0;
    for &v in &walk {
        if ids[v] == usize::MAX {
            ids[v] = next_id;
            next_id += 1;
        }
    }
    let mut counts = std::collections::BTreeMap::new();
    for i in 0..len {
        *counts.entry((ids[walk[i]], ids[walk[(i + 1) % len]])).or_insert(0u64) += 1;
    }
    let classes = counts.into_iter().map(|((src, dst), mult)| EdgeClass { src, dst, mult }).collect();
    Multigraph::new(next_id, classes).expect("ids are in range")
}

/// Counts arborescences towards `root` by trying every choice of outgoing
/// edge at every other node.
pub fn brute_force_arborescences(g: &Multigraph, root: usize) -> BigUint {
    let n = g.node_count();
    let mut touched = vec![false; n];
    for c in g.classes() {
        touched[c.src] = true;
        touched[c.dst] = true;
    }
    let nodes: Vec<usize> = (0..n).filter(|&v| touched[v] && v != root).collect();
    let options: Vec<Vec<(usize, u64)>> = nodes
        .iter()
        .map(|&v| g.classes().iter().filter(|c| c.src == v && c.dst != v).map(|c| (c.dst, c.mult)).collect())
        .collect();
    let mut choice = vec![0usize; nodes.len()];
    let mut total = BigUint::default();
    if options.iter().any(|o| o.is_empty()) {
        return total;
    }
    let mut next = vec![usize::MAX; n];
    loop {
        let mut weight = BigUint::one();
        for (i, &v) in nodes.iter().enumerate() {
            let (dst, mult) = options[i][choice[i]];
            next[v] = dst;
            weight *= mult;
        }
        let reaches_root = nodes.iter().all(|&v| {
            let mut x = v;
            for _ in 0..=nodes.len() {
                if x == root {
                    return true;
                }
                x = next[x];
            }
            false
        });
        if reaches_root {
            total += weight;
        }
        let mut i = 0;
        loop {
            if i == nodes.len() {
                return if nodes.is_empty() { BigUint::one() } else { total };
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
