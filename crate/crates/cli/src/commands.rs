//! One function per subcommand, each turning a genome and a resolved
//! configuration into an output [`Document`].

use asmdist::coverage::{distortion_bound_curve, required_reads, sample_reads, RepeatStats, RequiredReads, SamplingParams};
use asmdist::distortion::{count_digits, distortion, dk, insufficient, DistortionValue};
use asmdist::greedy::{check_theorem1_conditions, check_theorem2_conditions, greedy_assemble, TraceEntry};
use asmdist::par::{self, Exec};
use asmdist::repeats::{critical_read_length, RepeatCatalog};
use asmdist::seqcore::CircularSequence;
use asmdist::seqgraph::{build_kmer_graph, text::to_text, SequenceGraph};
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, ExperimentConfig};
use crate::error::Result;
use crate::output::{Cell, Document, Table};

/// Extra orders past the critical length in the default dk grid.
const DK_MARGIN: usize = 5;

pub fn run(command: &Command, s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    match command {
        Command::DkCurve(_) => dk_curve(s, config),
        Command::CoverageCurve(_) => coverage_curve(s, config),
        Command::DistortionCurve(_) => distortion_curve(s, config),
        Command::Simulate(_) => simulate(s, config),
        Command::Repeats(_) => repeats(s, config),
        Command::GraphDump(_) => graph_dump(s, config),
    }
}

/// Rough peak memory of a run in bytes, printed before large runs.
pub fn memory_estimate(config: &ExperimentConfig) -> u64 {
    let g = config.genome_len as u64;
    let k = config.k.or_else(|| config.k_grid.as_ref().and_then(|v| v.last().copied())).unwrap_or(32) as u64;
    // suffix array, LCP and rank arrays plus the k-mer graph with its labels
    let index = 40 * g;
    let graph = g * (k + 96);
    let reads = match (&config.read_lens, &config.coverages) {
        (Some(ls), Some(cs)) if config.command == "simulate" || config.command == "graph-dump" => {
            let l = *ls.iter().max().unwrap() as u64;
            let c = cs.iter().cloned().fold(0.0, f64::max);
            let n = (c * g as f64 / l as f64).ceil() as u64;
            n * (l + 2) * (k + 64)
        }
        _ => 0,
    };
    index + graph + reads
}

fn dk_row(k: usize, d: &DistortionValue) -> Vec<Cell> {
    vec![k.into(), d.log10_distortion.into(), d.count.as_ref().map(|c| count_digits(c).digits).into()]
}

fn dk_curve(s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    let ks = config.k_grid.get_or_insert_with(Vec::new);
    if ks.is_empty() {
        let top = (critical_read_length(s) + DK_MARGIN).min(s.len());
        ks.extend(1..=top);
    }
    let mut t = Table::new("dk_curve", &["k", "log10_distortion", "exact_count_digits"]);
    for &k in ks.iter() {
        t.push(dk_row(k, &dk(s, k)?));
    }
    Ok(Document::table(t))
}

fn coverage_curve(s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    let k = config.k.unwrap();
    let (eps, mode) = (config.epsilon.unwrap(), config.mode.unwrap());
    let stats = RepeatStats::new(s, k)?;
    let ls = config.read_lens.clone().unwrap();
    let needs = par::map(Exec::Parallel, &ls, |&l| required_reads(&stats, l, eps, mode));
    let g = s.len() as f64;
    let mut t = Table::new("coverage_curve", &["L", "N_required", "coverage_depth", "infinite_flag"]);
    for (&l, need) in ls.iter().zip(needs) {
        match need? {
            RequiredReads::Finite(n) => t.push(vec![l.into(), n.into(), (n as f64 * l as f64 / g).into(), false.into()]),
            RequiredReads::Infinite => t.push(vec![l.into(), Cell::Null, Cell::Null, true.into()]),
        }
    }
    let mut hist = Table::new("triple_length_histogram", &["length", "count"]);
    for (len, count) in stats.triple_histogram() {
        hist.push(vec![len.into(), count.into()]);
    }
    Ok(Document { tables: vec![t, hist], details: None })
}

fn distortion_curve(s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    let stats = RepeatStats::new(s, config.k.unwrap())?;
    let rows = distortion_bound_curve(
        s,
        &stats,
        config.read_lens.as_ref().unwrap(),
        config.coverages.as_ref().unwrap(),
        config.epsilon.unwrap(),
        config.mode.unwrap(),
        Exec::Parallel,
    )?;
    let mut t = Table::new(
        "distortion_curve",
        &["L", "coverage", "N", "q_star", "upper_bound_log10", "lower_bound_log10", "gap_flag"],
    );
    for r in rows {
        t.push(vec![
            r.read_len.into(),
            r.coverage.into(),
            r.reads.into(),
            r.q_star.into(),
            r.upper_log10.into(),
            r.lower_log10.into(),
            r.gap.into(),
        ]);
    }
    Ok(Document::table(t))
}

#[derive(Serialize)]
struct SimulationPoint {
    read_len: usize,
    coverage: f64,
    reads: usize,
    seed: u64,
    q: Option<usize>,
    distortion: DistortionValue,
    theorem1_conditions: bool,
    theorem2_conditions: Option<bool>,
    graph_nodes: usize,
    graph_edges: usize,
    trace: Vec<TraceEntry>,
}

fn simulate_point(s: &CircularSequence, k: usize, q: Option<usize>, l: usize, c: f64, seed: u64) -> Result<SimulationPoint> {
    let params = SamplingParams::from_coverage(c, l, s.len(), seed)?;
    let reads = sample_reads(s, &params)?;
    let q = q.or(l.checked_sub(2)).filter(|&q| q >= k);
    let mut point = SimulationPoint {
        read_len: l,
        coverage: c,
        reads: reads.len(),
        seed,
        q,
        distortion: insufficient(s)?,
        theorem1_conditions: false,
        theorem2_conditions: q.map(|_| false),
        graph_nodes: 0,
        graph_edges: 0,
        trace: Vec::new(),
    };
    if reads.is_empty() {
        return Ok(point);
    }
    let a = greedy_assemble(&reads, k, Some(s.len()))?;
    point.distortion = distortion(&a.graph, s)?;
    point.theorem1_conditions = check_theorem1_conditions(s, &reads, k)?;
    point.theorem2_conditions = q.map(|q| check_theorem2_conditions(s, &reads, k, q)).transpose()?;
    point.graph_nodes = a.graph.node_count();
    point.graph_edges = a.graph.edges().len();
    point.trace = a.trace;
    Ok(point)
}

fn simulate(s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    let k = config.k.unwrap();
    let points: Vec<(usize, f64)> = config
        .read_lens
        .as_ref()
        .unwrap()
        .iter()
        .flat_map(|&l| config.coverages.as_ref().unwrap().iter().map(move |&c| (l, c)))
        .collect();
    let seed = config.seed;
    let indexed: Vec<(usize, (usize, f64))> = points.into_iter().enumerate().collect();
    let results = par::map(Exec::Parallel, &indexed, |&(i, (l, c))| simulate_point(s, k, config.q, l, c, seed ^ i as u64));
    let mut t = Table::new(
        "simulation",
        &[
            "L",
            "coverage",
            "N",
            "seed",
            "sufficient",
            "log10_distortion",
            "exact_count_digits",
            "theorem1_conditions",
            "q",
            "theorem2_conditions",
        ],
    );
    let mut details = Vec::new();
    for r in results {
        let p = r?;
        t.push(vec![
            p.read_len.into(),
            p.coverage.into(),
            p.reads.into(),
            Cell::Int(p.seed),
            p.distortion.sufficient.into(),
            p.distortion.log10_distortion.into(),
            p.distortion.count.as_ref().map(|c| count_digits(c).digits).into(),
            p.theorem1_conditions.into(),
            p.q.into(),
            p.theorem2_conditions.into(),
        ]);
        details.push(serde_json::to_value(&p).expect("serializable"));
    }
    Ok(Document { tables: vec![t], details: Some(json!({ "points": details })) })
}

fn repeats(s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    let catalog = RepeatCatalog::build(s, config.k.unwrap());
    let mut t = Table::new("repeats", &["kind", "positions", "length", "capped"]);
    for p in &catalog.pairs {
        t.push(vec!["pair".to_string().into(), format!("{};{}", p.pos_a, p.pos_b).into(), p.len.into(), p.capped.into()]);
    }
    for r in &catalog.triples {
        let pos: Vec<String> = r.positions.iter().map(|p| p.to_string()).collect();
        t.push(vec!["triple".to_string().into(), pos.join(";").into(), r.len.into(), false.into()]);
    }
    Ok(Document::table(t))
}

fn dump_graph(g: &SequenceGraph) -> Table {
    let mut t = Table::new("graph", &["kind", "src", "dst", "label", "value"]);
    for line in to_text(g).lines() {
        let f: Vec<&str> = line.split(' ').collect();
        let text = |i: usize| Cell::Text(f[i].to_string());
        match f[0] {
            "N" => t.push(vec![text(0), text(1), Cell::Null, text(2), text(3)]),
            "E" => t.push(vec![text(0), text(1), text(2), text(3), text(4)]),
            _ => {}
        }
    }
    t
}

fn graph_dump(s: &CircularSequence, config: &mut ExperimentConfig) -> Result<Document> {
    let k = config.k.unwrap();
    let g = match (&config.read_lens, &config.coverages) {
        (Some(ls), Some(cs)) => {
            let params = SamplingParams::from_coverage(cs[0], ls[0], s.len(), config.seed)?;
            let reads = sample_reads(s, &params)?;
            if reads.is_empty() {
                return Err(asmdist::Error::InvalidArgument("coverage too low to draw any read".into()).into());
            }
            greedy_assemble(&reads, k, Some(s.len()))?.graph
        }
        _ => build_kmer_graph(s, k)?,
    };
    Ok(Document::table(dump_graph(&g)))
}
