//! Line-oriented text form of a sequence graph.
//!
//! ```text
//! order 3
//! N <id> <label> <positions>
//! E <src> <dst> <label> <multiplicity>
//! ```
//!
//! Empty labels and missing position sets are written as `-`; positions are
//! `;`-separated. `N` lines precede `E` lines and each group is sorted
//! lexicographically, so equal graphs dump to identical text.

use std::fmt::Write;

use super::{Edge, SequenceGraph};
use crate::error::{invalid, Error, Result};
use crate::seqcore::LinearString;

fn label_text(l: &LinearString) -> String {
    if l.is_empty() {
        "-".to_string()
    } else {
        l.to_string()
    }
}

pub fn to_text(g: &SequenceGraph) -> String {
    let mut nodes: Vec<String> = (0..g.node_count())
        .map(|v| {
            let pos = match g.provenance() {
                Some(p) if !p[v].is_empty() => {
                    p[v].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
                }
                _ => "-".to_string(),
            };
            format!("N {v} {} {pos}", label_text(g.label(v)))
        })
        .collect();
    let mut edges: Vec<String> =
        g.edges().iter().map(|e| format!("E {} {} {} {}", e.src, e.dst, e.label, e.mult)).collect();
    nodes.sort();
    edges.sort();
    let mut out = String::new();
    writeln!(out, "order {}", g.order()).unwrap();
    for line in nodes.iter().chain(&edges) {
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::InvalidArgument(format!("graph text line {line}: {msg}"))
}

pub fn from_text(text: &str) -> Result<SequenceGraph> {
    let mut order = None;
    let mut nodes: Vec<(usize, LinearString, Option<Vec<usize>>)> = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(i, "expected an integer"));
        match f.as_slice() {
            ["order", k] => order = Some(num(k)?),
            ["N", id, label, pos] => {
                let label = if *label == "-" { LinearString::empty() } else { label.parse()? };
                let pos = if *pos == "-" { None } else { Some(pos.split(';').map(num).collect::<Result<_>>()?) };
                nodes.push((num(id)?, label, pos));
            }
            ["E", src, dst, label, mult] => edges.push(Edge {
                src: num(src)?,
                dst: num(dst)?,
                label: label.parse()?,
                mult: num(mult)? as u64,
            }),
            _ => return Err(parse_err(i, "unrecognised record")),
        }
    }
    let Some(order) = order else {
        return invalid("graph text lacks an order line");
    };
    nodes.sort_by_key(|n| n.0);
    if nodes.iter().enumerate().any(|(i, n)| n.0 != i) {
        return invalid("node ids must be 0..n without gaps");
    }
    let any_pos = nodes.iter().any(|n| n.2.is_some());
    let provenance = any_pos.then(|| nodes.iter().map(|n| n.2.clone().unwrap_or_default()).collect());
    let labels = nodes.into_iter().map(|n| n.1).collect();
    SequenceGraph::new(order, labels, edges, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqgraph::{build_cycle_graph, build_kmer_graph};

    #[test]
    fn round_trip() {
        let s = "GGTCCAGTCGGTTCAA".parse().unwrap();
        for g in [build_kmer_graph(&s, 1).unwrap(), build_kmer_graph(&s, 3).unwrap(), build_cycle_graph(&s, 2).unwrap()]
        {
            let text = to_text(&g);
            let back = from_text(&text).unwrap();
            assert_eq!(to_text(&back), text);
            assert_eq!(back.node_count(), g.node_count());
        }
    }

    #[test]
    fn order_one_labels_are_dashes() {
        let s = "ACGT".parse().unwrap();
        let text = to_text(&build_cycle_graph(&s, 1).unwrap());
        assert!(text.contains("N 0 - 1\n"));
        assert!(text.contains("E 0 1 A 1\n"));
    }

    #[test]
    fn malformed_input() {
        assert!(from_text("N 0 - -\n").is_err());
        assert!(from_text("order 2\nX 1\n").is_err());
        assert!(from_text("order 2\nN 1 A -\n").is_err());
    }
}
