//! Eulerian-cycle counting and the distortion of an assembly graph.
//!
//! Counting works on a [`Multigraph`] of edge classes: each class is a set of
//! interchangeable parallel edges, and two cycles are the same when they visit
//! the classes in the same cyclic order. The raw count treats every edge copy
//! as distinct and follows the BEST theorem. The class count is obtained from
//! the raw count by averaging over the rotations that fix a class word, which
//! stays exact for graphs where every class has multiplicity at least two.
//!
//! Chains of nodes with a single incoming and a single outgoing class are
//! contracted before the determinant is taken. This keeps the Laplacian small
//! for k-mer graphs of long genomes at large `k`.

pub mod brute;
pub mod det;

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::par::Exec;
use crate::seqcore::CircularSequence;
use crate::seqgraph::{self, SequenceGraph};

pub use brute::{brute_force_eulerian, BruteForceCount, DEFAULT_MAX_EDGES};

/// A class of `mult` interchangeable parallel edges `src -> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeClass {
    pub src: usize,
    pub dst: usize,
    pub mult: u64,
}

/// Directed multigraph given by its edge classes. Parallel classes between the
/// same pair of nodes are allowed and stay distinguishable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    node_count: usize,
    classes: Vec<EdgeClass>,
}

impl Multigraph {
    pub fn new(node_count: usize, classes: Vec<EdgeClass>) -> Result<Self> {
        if let Some(c) = classes.iter().find(|c| c.src >= node_count || c.dst >= node_count) {
            return invalid(format!("edge {} -> {} outside {node_count} nodes", c.src, c.dst));
        }
        let classes = classes.into_iter().filter(|c| c.mult > 0).collect();
        Ok(Multigraph { node_count, classes })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn total_edges(&self) -> u64 {
        self.classes.iter().map(|c| c.mult).sum()
    }

    fn out_degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.node_count];
        for c in &self.classes {
            d[c.src] += c.mult;
        }
        d
    }

    /// Balanced degrees at every node and a connected edge support.
    pub fn is_eulerian(&self) -> bool {
        if self.classes.is_empty() {
            return false;
        }
        let mut balance = vec![0i64; self.node_count];
        let mut parent: Vec<usize> = (0..self.node_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in &self.classes {
            balance[c.src] += c.mult as i64;
            balance[c.dst] -= c.mult as i64;
            let (a, b) = (find(&mut parent, c.src), find(&mut parent, c.dst));
            parent[a] = b;
        }
        if balance.iter().any(|&b| b != 0) {
            return false;
        }
        let root = find(&mut parent, self.classes[0].src);
        self.classes.iter().all(|c| find(&mut parent, c.src) == root)
    }

    fn require_eulerian(&self) -> Result<()> {
        if self.is_eulerian() {
            Ok(())
        } else {
            invalid("graph is not Eulerian")
        }
    }
}

/// Result of contracting single-class chains.
struct Reduced {
    graph: Multigraph,
    /// Multiplicities of the contracted nodes; each contributes that many choices
    /// of outgoing edge to every arborescence of the original graph.
    contracted: Vec<u64>,
}

fn reduce(g: &Multigraph) -> Reduced {
    let n = g.node_count;
    let mut classes: Vec<Option<EdgeClass>> = g.classes.iter().copied().map(Some).collect();
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in g.classes.iter().enumerate() {
        outs[c.src].push(i);
        ins[c.dst].push(i);
    }
    let mut alive: Vec<bool> = (0..n).map(|v| !outs[v].is_empty()).collect();
    let mut alive_count = alive.iter().filter(|&&a| a).count();
    let mut contracted = Vec::new();
    for v in 0..n {
        if !alive[v] || alive_count == 1 || ins[v].len() != 1 || outs[v].len() != 1 || ins[v][0] == outs[v][0] {
            continue;
        }
        let (a, b) = (ins[v][0], outs[v][0]);
        let ca = classes[a].take().unwrap();
        let cb = classes[b].take().unwrap();
        let id = classes.len();
        classes.push(Some(EdgeClass { src: ca.src, dst: cb.dst, mult: ca.mult }));
        for slot in outs[ca.src].iter_mut().filter(|x| **x == a) {
            *slot = id;
        }
        for slot in ins[cb.dst].iter_mut().filter(|x| **x == b) {
            *slot = id;
        }
        ins[v].clear();
        outs[v].clear();
        alive[v] = false;
        alive_count -= 1;
        contracted.push(ca.mult);
    }
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if alive[v] {
            remap[v] = next;
            next += 1;
        }
    }
    let classes = classes
        .into_iter()
        .flatten()
        .map(|c| EdgeClass { src: remap[c.src], dst: remap[c.dst], mult: c.mult })
        .collect();
    Reduced { graph: Multigraph { node_count: next, classes }, contracted }
}

/// Arborescences towards `root` of the graph, whose isolated nodes are ignored.
fn tree_count(g: &Multigraph, root: usize, exec: Exec) -> BigUint {
    let out = g.out_degrees();
    let mut touched = vec![false; g.node_count];
    for c in &g.classes {
        touched[c.src] = true;
        touched[c.dst] = true;
    }
    let nodes: Vec<usize> = (0..g.node_count).filter(|&v| touched[v] && v != root).collect();
    if nodes.is_empty() {
        return BigUint::one();
    }
    let mut index = vec![usize::MAX; g.node_count];
    for (i, &v) in nodes.iter().enumerate() {
        index[v] = i;
    }
    let m = nodes.len();
    let mut lap = vec![vec![0i64; m]; m];
    for c in &g.classes {
        if c.src == c.dst || c.src == root {
            continue;
        }
        let i = index[c.src];
        lap[i][i] += c.mult as i64;
        if c.dst != root {
            lap[i][index[c.dst]] -= c.mult as i64;
        }
    }
    let bound = det::bits_of_product(nodes.iter().map(|&v| out[v]));
    det::nonnegative_det(&lap, bound, exec)
}

/// Number of spanning arborescences oriented towards `root`.
pub fn count_arborescences(g: &Multigraph, root: usize) -> Result<BigUint> {
    g.require_eulerian()?;
    if root >= g.node_count {
        return invalid(format!("root {root} outside {} nodes", g.node_count));
    }
    Ok(tree_count(g, root, Exec::default()))
}

fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Arborescence count of an Eulerian graph through its chain-contracted form.
fn reduced_tree_count(r: &Reduced, exec: Exec) -> BigUint {
    let out = r.graph.out_degrees();
    let root = (0..r.graph.node_count).max_by_key(|&v| out[v]).unwrap_or(0);
    tree_count(&r.graph, root, exec)
}

/// Eulerian circuits with every parallel edge distinguishable.
pub fn count_eulerian_best(g: &Multigraph) -> Result<BigUint> {
    g.require_eulerian()?;
    let r = reduce(g);
    let mut total = reduced_tree_count(&r, Exec::default());
    for &m in &r.contracted {
        total *= m;
    }
    for d in g.out_degrees() {
        if d > 0 {
            total *= factorial(d - 1);
        }
    }
    Ok(total)
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Eulerian cycles of `g` distinct up to the order of parallel edges in a class.
pub fn count_eulerian_distinct(g: &Multigraph) -> Result<BigUint> {
    count_eulerian_distinct_with(g, Exec::default())
}

pub fn count_eulerian_distinct_with(g: &Multigraph, exec: Exec) -> Result<BigUint> {
    g.require_eulerian()?;
    let r = reduce(g);
    let h = &r.graph;
    let n = h.total_edges();
    let period = h.classes.iter().fold(0u64, |acc, c| acc.gcd(&c.mult));
    let trees = reduced_tree_count(&r, exec);
    let degrees: Vec<u64> = h.out_degrees().into_iter().filter(|&d| d > 0).collect();
    let v = degrees.len() as u32;
    let mut sum = BigUint::zero();
    for j in (1..=period).filter(|j| period % j == 0) {
        // closed class words of length n / j, each repeated j times
        let scaled_trees = &trees / BigUint::from(j).pow(v - 1);
        let mut num = scaled_trees * (n / j) * euler_phi(j);
        for &d in &degrees {
            num *= factorial(d / j - 1);
        }
        let mut den = BigUint::one();
        for c in &h.classes {
            den *= factorial(c.mult / j);
        }
        sum += num / den;
    }
    Ok(sum / n)
}

/// Exact Eulerian-cycle count of the k-mer graph of `s`.
pub fn kmer_graph_cycle_count(s: &CircularSequence, k: usize) -> Result<BigUint> {
    count_eulerian_distinct(&seqgraph::build_kmer_graph(s, k)?.to_multigraph())
}

/// Decimal summary of an exact count.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDigits {
    pub digits: usize,
    /// Up to 17 leading decimal digits.
    pub leading: String,
    pub log10: f64,
}

pub fn count_digits(x: &BigUint) -> CountDigits {
    if x.is_zero() {
        return CountDigits { digits: 1, leading: "0".into(), log10: f64::NEG_INFINITY };
    }
    let text = x.to_str_radix(10);
    let leading: String = text.chars().take(17).collect();
    let mantissa = leading.parse::<f64>().unwrap() / 10f64.powi(leading.len() as i32 - 1);
    CountDigits { digits: text.len(), log10: (text.len() - 1) as f64 + mantissa.log10(), leading }
}

/// Base-10 log of a positive exact count.
pub fn log10_count(x: &BigUint) -> f64 {
    if let Some(v) = x.to_f64().filter(|v| v.is_finite() && *v < 1e15) {
        return v.log10();
    }
    count_digits(x).log10
}

/// Distortion of a graph with respect to a genome, or a k-mer-graph distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionValue {
    pub sufficient: bool,
    pub log10_distortion: f64,
    /// Exact Eulerian-cycle count behind the value; absent for insufficient graphs.
    pub count: Option<BigUint>,
    /// Always false: distinct counts are exact for every multiplicity pattern.
    pub upper_bound_only: bool,
}

impl DistortionValue {
    fn from_count(count: BigUint) -> Self {
        DistortionValue {
            sufficient: true,
            log10_distortion: log10_count(&count),
            count: Some(count),
            upper_bound_only: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sufficient && self.count.as_ref().is_some_and(|c| c.is_one())
    }
}

impl fmt::Display for DistortionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self.log10_distortion)?;
        if !self.sufficient {
            write!(f, " (not sufficient)")?;
        }
        Ok(())
    }
}

impl Serialize for DistortionValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let digits = self.count.as_ref().map(count_digits);
        let mut st = serializer.serialize_struct("DistortionValue", 5)?;
        st.serialize_field("sufficient", &self.sufficient)?;
        st.serialize_field("log10_distortion", &self.log10_distortion)?;
        st.serialize_field("exact_count_digits", &digits.as_ref().map(|d| d.digits))?;
        st.serialize_field("exact_count_leading", &digits.as_ref().map(|d| d.leading.clone()))?;
        st.serialize_field("upper_bound_only", &self.upper_bound_only)?;
        st.end()
    }
}

/// `log10` of the number of distinct cycles of the k-mer graph of `s`.
pub fn dk(s: &CircularSequence, k: usize) -> Result<DistortionValue> {
    if k == 0 || k > s.len() {
        return invalid(format!("k = {k} outside 1..={}", s.len()));
    }
    Ok(DistortionValue::from_count(kmer_graph_cycle_count(s, k)?))
}

/// Distortion of `g` for genome `s`: the cycle count of the genome-weighted
/// graph when `g` can spell `s`, otherwise one more than the k = 1 value.
pub fn distortion(g: &SequenceGraph, s: &CircularSequence) -> Result<DistortionValue> {
    match seqgraph::check_sufficiency(g, s)? {
        Some(cycle) => {
            let weighted = seqgraph::eulerianize(g, &cycle)?;
            let count = count_eulerian_distinct(&weighted.to_multigraph())?;
            Ok(DistortionValue::from_count(count))
        }
        None => insufficient(s),
    }
}

/// The value assigned to a graph that cannot spell `s`: `D_1(s) + 1`.
pub fn insufficient(s: &CircularSequence) -> Result<DistortionValue> {
    let d1 = dk(s, 1)?;
    Ok(DistortionValue {
        sufficient: false,
        log10_distortion: d1.log10_distortion + 1.0,
        count: None,
        upper_bound_only: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mg(n: usize, edges: &[(usize, usize, u64)]) -> Multigraph {
        Multigraph::new(n, edges.iter().map(|&(src, dst, mult)| EdgeClass { src, dst, mult }).collect()).unwrap()
    }

    #[test]
    fn directed_cycle() {
        let g = mg(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)]);
        for root in 0..5 {
            assert_eq!(count_arborescences(&g, root).unwrap(), BigUint::one());
        }
        assert_eq!(count_eulerian_best(&g).unwrap(), BigUint::one());
        assert_eq!(count_eulerian_distinct(&g).unwrap(), BigUint::one());
    }

    #[test]
    fn single_node_loops() {
        // one node with loops A:2, C:1, G:2, T:2
        let g = mg(1, &[(0, 0, 2), (0, 0, 1), (0, 0, 2), (0, 0, 2)]);
        assert_eq!(count_arborescences(&g, 0).unwrap(), BigUint::one());
        assert_eq!(count_eulerian_best(&g).unwrap(), BigUint::from(720u32));
        assert_eq!(count_eulerian_distinct(&g).unwrap(), BigUint::from(90u32));
    }

    #[test]
    fn symmetric_multiplicities() {
        // one loop of multiplicity 4: a single cycle
        assert_eq!(count_eulerian_distinct(&mg(1, &[(0, 0, 4)])).unwrap(), BigUint::one());
        // two loops of multiplicity 2: AABB and ABAB up to rotation
        assert_eq!(count_eulerian_distinct(&mg(1, &[(0, 0, 2), (0, 0, 2)])).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn rejects_unbalanced_or_disconnected() {
        assert!(count_eulerian_best(&mg(2, &[(0, 1, 1)])).is_err());
        assert!(count_eulerian_distinct(&mg(2, &[(0, 0, 1), (1, 1, 1)])).is_err());
        assert!(count_arborescences(&mg(2, &[(0, 1, 2), (1, 0, 1)]), 0).is_err());
        assert!(count_eulerian_best(&mg(3, &[])).is_err());
    }

    #[test]
    fn isolated_nodes_are_ignored() {
        let g = mg(4, &[(0, 1, 1), (1, 0, 1)]);
        assert_eq!(count_eulerian_distinct(&g).unwrap(), BigUint::one());
    }

    #[test]
    fn digits_and_log() {
        let x = BigUint::from(90u32);
        assert!((log10_count(&x) - 90f64.log10()).abs() < 1e-14);
        let big = factorial(100);
        let d = count_digits(&big);
        assert_eq!(d.digits, 158);
        assert_eq!(d.leading, "93326215443944152");
        assert!((d.log10 - 157.97000365471578).abs() < 1e-10);
    }

    #[test]
    fn phi_values() {
        let v: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(v, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }
}
