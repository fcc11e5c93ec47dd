//! Command-line flags and their resolution into an [`ExperimentConfig`].

use std::path::PathBuf;

use asmdist::coverage::Mode;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{usage, Result};

/// Genomes longer than this need `--large`.
pub const LARGE_GENOME: usize = 1_000_000;

/// Order used by the curve commands when `--k` is absent.
pub const DEFAULT_CURVE_K: usize = 300;
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(name = "asmdist", version, about = "Partial-assembly distortion experiments on circular genomes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// log10 Eulerian-cycle counts of k-mer graphs over a k grid
    DkCurve(Opts),
    /// Reads needed for the greedy guarantee over a read-length grid
    CoverageCurve(Opts),
    /// Distortion upper and lower bounds over read-length and coverage grids
    DistortionCurve(Opts),
    /// Sample reads, assemble greedily and measure the distortion
    Simulate(Opts),
    /// Maximal repeat pairs and triples
    Repeats(Opts),
    /// Dump the k-mer graph, or a greedy assembly graph
    GraphDump(Opts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DkCurve(_) => "dk-curve",
            Command::CoverageCurve(_) => "coverage-curve",
            Command::DistortionCurve(_) => "distortion-curve",
            Command::Simulate(_) => "simulate",
            Command::Repeats(_) => "repeats",
            Command::GraphDump(_) => "graph-dump",
        }
    }

    pub fn opts(&self) -> &Opts {
        match self {
            Command::DkCurve(o)
            | Command::CoverageCurve(o)
            | Command::DistortionCurve(o)
            | Command::Simulate(o)
            | Command::Repeats(o)
            | Command::GraphDump(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// FASTA file holding the genome
    #[arg(long)]
    pub genome: PathBuf,
    /// Record to use from a multi-record FASTA file
    #[arg(long)]
    pub record: Option<String>,
    /// Graph order; a grid for dk-curve, the minimum repeat length for repeats
    #[arg(long)]
    pub k: Option<String>,
    /// Longest repeat the cycle-count guarantee must resolve (simulate)
    #[arg(long)]
    pub q: Option<usize>,
    /// Read lengths: `a:b`, `a:b:step` or a comma list
    #[arg(long = "L-grid", value_name = "GRID")]
    pub l_grid: Option<String>,
    /// Coverage depths c = NL/G, same syntax as --L-grid
    #[arg(long, value_name = "GRID")]
    pub coverage_grid: Option<String>,
    /// Allowed failure probability
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact binomial probabilities (default)
    #[arg(long, conflicts_with = "approx")]
    pub exact: bool,
    /// Poisson approximations
    #[arg(long)]
    pub approx: bool,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Allow genomes longer than 1 Mbp
    #[arg(long)]
    pub large: bool,
}

/// Fully resolved parameters of one run, echoed in every output header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: &'static str,
    pub genome: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<String>,
    pub genome_len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub read_lens: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverages: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub seed: u64,
    pub format: Format,
    pub large: bool,
}

/// Parses `a:b`, `a:b:step` (inclusive) or comma lists of either; the
/// result is sorted and deduplicated.
pub fn parse_usize_grid(text: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for piece in text.split(',').map(str::trim) {
        let parts: Vec<&str> = piece.split(':').collect();
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad grid value {s:?} in {text:?}"));
        match parts[..] {
            [v] => out.push(num(v)?),
            [a, b] | [a, b, _] => {
                let (a, b) = (num(a)?, num(b)?);
                let step = if parts.len() == 3 { num(parts[2])? } else { 1 };
                if step == 0 || a > b {
                    return Err(format!("empty or unbounded range {piece:?}"));
                }
                out.extend((a..=b).step_by(step));
            }
            _ => return Err(format!("bad grid piece {piece:?}")),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Like [`parse_usize_grid`] for positive reals. Range points are
/// `a + i * step`, rounded to 12 significant digits.
pub fn parse_f64_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for piece in text.split(',').map(str::trim) {
        let parts: Vec<&str> = piece.split(':').collect();
        let num = |s: &str| match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(format!("bad grid value {s:?} in {text:?}")),
        };
        match parts[..] {
            [v] => out.push(num(v)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if a > b || (b - a) / step > 1e6 {
                    return Err(format!("empty or oversized range {piece:?}"));
                }
                let n = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=n).map(|i| crate::output::round_sig(a + i as f64 * step)));
            }
            _ => return Err(format!("real grids take values or a:b:step, not {piece:?}")),
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn grid<T>(flag: &str, text: &str, parse: fn(&str) -> std::result::Result<Vec<T>, String>) -> Result<Vec<T>> {
    match parse(text) {
        Ok(v) if !v.is_empty() => Ok(v),
        Ok(_) => usage(format!("--{flag} is empty")),
        Err(e) => usage(format!("--{flag}: {e}")),
    }
}

impl Opts {
    fn reject(&self, command: &str, flags: &[&str]) -> Result<()> {
        for &f in flags {
            let given = match f {
                "k" => self.k.is_some(),
                "q" => self.q.is_some(),
                "L-grid" => self.l_grid.is_some(),
                "coverage-grid" => self.coverage_grid.is_some(),
                "epsilon" => self.epsilon.is_some(),
                "exact/--approx" => self.exact || self.approx,
                _ => unreachable!("{f}"),
            };
            if given {
                return usage(format!("--{f} is not used by {command}"));
            }
        }
        Ok(())
    }

    fn single_k(&self) -> Result<Option<usize>> {
        match &self.k {
            None => Ok(None),
            Some(t) => match t.trim().parse::<usize>() {
                Ok(k) => Ok(Some(k)),
                Err(_) => usage(format!("--k must be a single integer here, not {t:?}")),
            },
        }
    }

    fn mode(&self) -> Mode {
        if self.approx {
            Mode::Approx
        } else {
            Mode::Exact
        }
    }

    fn epsilon(&self) -> Result<f64> {
        let e = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(e > 0.0 && e < 1.0) {
            return usage(format!("--epsilon must lie in (0, 1), got {e}"));
        }
        Ok(e)
    }

    fn read_lens(&self, g: usize) -> Result<Option<Vec<usize>>> {
        let Some(t) = &self.l_grid else { return Ok(None) };
        let ls = grid("L-grid", t, parse_usize_grid)?;
        if ls[0] == 0 || *ls.last().unwrap() > g {
            return usage(format!("--L-grid values must lie in 1..={g}"));
        }
        Ok(Some(ls))
    }

    fn coverages(&self) -> Result<Option<Vec<f64>>> {
        self.coverage_grid.as_deref().map(|t| grid("coverage-grid", t, parse_f64_grid)).transpose()
    }
}

fn required<T>(v: Option<T>, flag: &str, command: &str) -> Result<T> {
    match v {
        Some(v) => Ok(v),
        None => usage(format!("{command} needs --{flag}")),
    }
}

/// Checks flags against the genome length and fills in defaults.
pub fn resolve(command: &Command, genome_len: usize) -> Result<ExperimentConfig> {
    let o = command.opts();
    let name = command.name();
    if genome_len > LARGE_GENOME && !o.large {
        return usage(format!("the genome has {genome_len} bp; pass --large to run above {LARGE_GENOME} bp"));
    }
    let mut c = ExperimentConfig {
        command: name,
        genome: o.genome.clone(),
        record: o.record.clone(),
        genome_len,
        k: None,
        k_grid: None,
        q: None,
        read_lens: None,
        coverages: None,
        epsilon: None,
        mode: None,
        seed: o.seed,
        format: o.format,
        large: o.large,
    };
    let check_k = |k: usize| -> Result<usize> {
        if k == 0 || k > genome_len {
            return usage(format!("--k must lie in 1..={genome_len}, got {k}"));
        }
        Ok(k)
    };
    match command {
        Command::DkCurve(_) => {
            o.reject(name, &["q", "L-grid", "coverage-grid", "epsilon", "exact/--approx"])?;
            let ks = match &o.k {
                Some(t) => grid("k", t, parse_usize_grid)?,
                None => Vec::new(), // filled in from the critical length
            };
            for &k in &ks {
                check_k(k)?;
            }
            c.k_grid = Some(ks);
        }
        Command::CoverageCurve(_) => {
            o.reject(name, &["q", "coverage-grid"])?;
            c.k = Some(check_k(o.single_k()?.unwrap_or(DEFAULT_CURVE_K))?);
            c.read_lens = Some(required(o.read_lens(genome_len)?, "L-grid", name)?);
            c.epsilon = Some(o.epsilon()?);
            c.mode = Some(o.mode());
        }
        Command::DistortionCurve(_) => {
            o.reject(name, &["q"])?;
            c.k = Some(check_k(o.single_k()?.unwrap_or(DEFAULT_CURVE_K))?);
            c.read_lens = Some(required(o.read_lens(genome_len)?, "L-grid", name)?);
            c.coverages = Some(required(o.coverages()?, "coverage-grid", name)?);
            c.epsilon = Some(o.epsilon()?);
            c.mode = Some(o.mode());
        }
        Command::Simulate(_) => {
            o.reject(name, &["epsilon", "exact/--approx"])?;
            let k = check_k(required(o.single_k()?, "k", name)?)?;
            let ls = required(o.read_lens(genome_len)?, "L-grid", name)?;
            if ls[0] < k {
                return usage(format!("read lengths must be at least k = {k}"));
            }
            if let Some(q) = o.q {
                if q < k || q + 2 > ls[0] {
                    return usage(format!("--q must lie in {k}..=L-2 for every L"));
                }
            }
            c.k = Some(k);
            c.q = o.q;
            c.read_lens = Some(ls);
            c.coverages = Some(required(o.coverages()?, "coverage-grid", name)?);
        }
        Command::Repeats(_) => {
            o.reject(name, &["q", "L-grid", "coverage-grid", "epsilon", "exact/--approx"])?;
            c.k = Some(o.single_k()?.unwrap_or(1));
        }
        Command::GraphDump(_) => {
            o.reject(name, &["q", "epsilon", "exact/--approx"])?;
            let k = check_k(required(o.single_k()?, "k", name)?)?;
            c.k = Some(k);
            match (o.read_lens(genome_len)?, o.coverages()?) {
                (None, None) => {}
                (Some(ls), Some(cs)) if ls.len() == 1 && cs.len() == 1 => {
                    if ls[0] < k {
                        return usage(format!("read length must be at least k = {k}"));
                    }
                    c.read_lens = Some(ls);
                    c.coverages = Some(cs);
                }
                _ => return usage("graph-dump takes either no grids or one read length and one coverage"),
            }
        }
    }
    Ok(c)
}
