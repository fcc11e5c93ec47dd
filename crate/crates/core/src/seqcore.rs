//! Alphabet, circular genome, reads and substring primitives.
//!
//! Positions in the public API are 1-based and ranges are inclusive, so
//! `x.sub(i, j)` is the string `x[i], ..., x[j]`. Circular positions wrap
//! modulo the genome length.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// One nucleotide. Ordered `A < C < G < T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Symbol {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::A, Symbol::C, Symbol::G, Symbol::T];

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'A' | 'a' => Some(Symbol::A),
            'C' | 'c' => Some(Symbol::C),
            'G' | 'g' => Some(Symbol::G),
            'T' | 't' => Some(Symbol::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Symbol::A => 'A',
            Symbol::C => 'C',
            Symbol::G => 'G',
            Symbol::T => 'T',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Symbol {
        Symbol::ALL[i & 3]
    }
}

/// Parses a strict ACGT string. Lowercase is accepted; anything else is an
/// [`Error::InvalidSymbol`] carrying the 0-based character offset.
pub fn parse_symbols(text: &str) -> Result<Vec<Symbol>> {
    text.chars()
        .enumerate()
        .map(|(offset, c)| Symbol::from_char(c).ok_or(Error::InvalidSymbol { symbol: c, offset }))
        .collect()
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[Symbol]) -> fmt::Result {
    use fmt::Write;
    for s in symbols {
        f.write_char(s.to_char())?;
    }
    Ok(())
}

/// A finite string over the alphabet. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinearString(Vec<Symbol>);

impl LinearString {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        LinearString(symbols)
    }

    pub fn empty() -> Self {
        LinearString(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    /// `x[i]`, 1-based.
    pub fn at(&self, i: usize) -> Symbol {
        self.0[i - 1]
    }

    /// `x[i:j]`, 1-based inclusive. Empty when `j < i`.
    pub fn sub(&self, i: usize, j: usize) -> LinearString {
        assert!(i >= 1 && j <= self.len(), "range {i}:{j} out of bounds for length {}", self.len());
        if j < i {
            return LinearString::empty();
        }
        LinearString(self.0[i - 1..j].to_vec())
    }

    /// The `len`-prefix.
    pub fn prefix(&self, len: usize) -> LinearString {
        LinearString(self.0[..len].to_vec())
    }

    /// The `len`-suffix.
    pub fn suffix(&self, len: usize) -> LinearString {
        LinearString(self.0[self.len() - len..].to_vec())
    }

    /// `self ⊕ other`.
    pub fn concat(&self, other: &LinearString) -> LinearString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        LinearString(v)
    }
}

impl From<&[Symbol]> for LinearString {
    fn from(s: &[Symbol]) -> Self {
        LinearString(s.to_vec())
    }
}

impl FromStr for LinearString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbols(s).map(LinearString)
    }
}

impl fmt::Display for LinearString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

/// The circular target genome `s` of length `G >= 1`.
///
/// Equality is plain symbol equality of the stored linearization; use
/// [`CircularSequence::equals_up_to_rotation`] for circular equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircularSequence {
    symbols: Vec<Symbol>,
}

impl CircularSequence {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return invalid("a circular sequence needs at least one symbol");
        }
        Ok(CircularSequence { symbols })
    }

    /// Genome length `G`.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Reduces any integer position to the range `1..=G`.
    pub fn wrap(&self, t: i64) -> usize {
        let g = self.len() as i64;
        ((t - 1).rem_euclid(g) + 1) as usize
    }

    /// `s[t]` for any integer `t`, so that `s[t + G] = s[t]`.
    pub fn at(&self, t: i64) -> Symbol {
        self.symbols[self.wrap(t) - 1]
    }

    /// 0-based access with wraparound, used by the hot loops.
    #[inline]
    pub(crate) fn at0(&self, i: usize) -> Symbol {
        self.symbols[i % self.symbols.len()]
    }

    /// `s[start], ..., s[start+len-1]` with wraparound.
    pub fn circular_substring(&self, start: usize, len: usize) -> Result<LinearString> {
        if len == 0 {
            return invalid("substring length must be positive");
        }
        if start < 1 || start > self.len() {
            return invalid(format!("start {start} outside 1..={}", self.len()));
        }
        Ok(LinearString((0..len).map(|i| self.at0(start - 1 + i)).collect()))
    }

    /// The rotation that starts at position `t`.
    pub fn rotation(&self, t: usize) -> CircularSequence {
        let g = self.len();
        CircularSequence { symbols: (0..g).map(|i| self.at0(t - 1 + i)).collect() }
    }

    /// Lexicographically least rotation, a canonical form up to cyclic shift.
    pub fn canonical_rotation(&self) -> Vec<Symbol> {
        let start = least_rotation(&self.symbols);
        let g = self.len();
        (0..g).map(|i| self.symbols[(start + i) % g]).collect()
    }

    pub fn equals_up_to_rotation(&self, other: &CircularSequence) -> bool {
        self.len() == other.len() && self.canonical_rotation() == other.canonical_rotation()
    }

    pub fn to_linear(&self) -> LinearString {
        LinearString(self.symbols.clone())
    }
}

impl FromStr for CircularSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CircularSequence::new(parse_symbols(s)?)
    }
}

impl fmt::Display for CircularSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.symbols)
    }
}

/// Start index (0-based) of the lexicographically least rotation (Booth).
pub fn least_rotation<T: Ord>(xs: &[T]) -> usize {
    let n = xs.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &xs[(i + k) % n];
        let b = &xs[(j + k) % n];
        match a.cmp(b) {
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => {
                i += k + 1;
                if i <= j {
                    i = j + 1;
                }
                k = 0;
            }
            std::cmp::Ordering::Less => {
                j += k + 1;
                if j <= i {
                    j = i + 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// A read with its optional ground-truth placements (1-based starts in `s`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Read {
    pub content: LinearString,
    pub true_starts: Option<Vec<usize>>,
}

impl Read {
    pub fn unplaced(content: LinearString) -> Self {
        Read { content, true_starts: None }
    }
}

/// `N` reads of common length `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadSet {
    reads: Vec<Read>,
    read_len: usize,
}

impl ReadSet {
    /// Builds a read set, checking that every read has length `read_len`.
    pub fn new(read_len: usize, reads: Vec<Read>) -> Result<Self> {
        if read_len == 0 {
            return invalid("read length must be positive");
        }
        if let Some(r) = reads.iter().find(|r| r.content.len() != read_len) {
            return invalid(format!("read {} has length {}, expected {read_len}", r.content, r.content.len()));
        }
        Ok(ReadSet { reads, read_len })
    }

    /// Reads parsed from strings, without placements.
    pub fn from_strs(reads: &[&str]) -> Result<Self> {
        let parsed: Vec<Read> =
            reads.iter().map(|r| r.parse().map(Read::unplaced)).collect::<Result<_>>()?;
        let read_len = parsed.first().map(|r| r.content.len()).unwrap_or(1);
        ReadSet::new(read_len, parsed)
    }

    /// Exact reads of `s` at the given starts. Each read records every
    /// position of `s` at which its content occurs, not just the sampled one.
    pub fn from_starts(s: &CircularSequence, read_len: usize, starts: &[usize]) -> Result<Self> {
        if read_len == 0 {
            return invalid("read length must be positive");
        }
        let reads = starts
            .iter()
            .map(|&t| {
                let content = s.circular_substring(t, read_len)?;
                Ok(Read { content, true_starts: Some(vec![t]) })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut set = ReadSet { reads, read_len };
        set.complete_placements(s);
        Ok(set)
    }

    /// Replaces each read's placements with every position where it occurs in `s`.
    pub fn complete_placements(&mut self, s: &CircularSequence) {
        let mut index: std::collections::HashMap<&[Symbol], Vec<usize>> = Default::default();
        let contents: Vec<LinearString> = self.reads.iter().map(|r| r.content.clone()).collect();
        for c in &contents {
            index.entry(c.as_slice()).or_default();
        }
        let g = s.len();
        let mut window = Vec::with_capacity(self.read_len);
        for t in 1..=g {
            window.clear();
            window.extend((0..self.read_len).map(|i| s.at0(t - 1 + i)));
            if let Some(v) = index.get_mut(window.as_slice()) {
                v.push(t);
            }
        }
        for r in &mut self.reads {
            let found = &index[r.content.as_slice()];
            if !found.is_empty() {
                r.true_starts = Some(found.clone());
            }
        }
    }

    pub fn reads(&self) -> &[Read] {
        &self.reads
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// All recorded start positions, or a precondition violation when any read
    /// lacks placements.
    pub fn all_starts(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for r in &self.reads {
            match &r.true_starts {
                Some(ts) => out.extend_from_slice(ts),
                None => {
                    return Err(Error::PreconditionViolation(format!(
                        "read {} carries no true start positions",
                        r.content
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// The multiset of `order`-mers of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerComposition {
    order: usize,
    entries: BTreeMap<LinearString, usize>,
}

impl KmerComposition {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &BTreeMap<LinearString, usize> {
        &self.entries
    }

    pub fn multiplicity(&self, kmer: &LinearString) -> usize {
        self.entries.get(kmer).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// Distinct k-mers without counts.
    pub fn support(&self) -> Vec<LinearString> {
        self.entries.keys().cloned().collect()
    }
}

/// Largest `l <= min(|x|, |y|)` such that the `l`-suffix of `x` is the `l`-prefix of `y`.
pub fn overlap_length(x: &LinearString, y: &LinearString) -> usize {
    let max = x.len().min(y.len());
    (1..=max)
        .rev()
        .find(|&l| x.as_slice()[x.len() - l..] == y.as_slice()[..l])
        .unwrap_or(0)
}

/// The circular `order`-mer composition `{ s[i:i+order-1] : 1 <= i <= G }`.
pub fn lmer_composition(s: &CircularSequence, order: usize) -> Result<KmerComposition> {
    if order == 0 {
        return invalid("composition order must be positive");
    }
    let mut entries = BTreeMap::new();
    for t in 1..=s.len() {
        let kmer = LinearString((0..order).map(|i| s.at0(t - 1 + i)).collect());
        *entries.entry(kmer).or_insert(0) += 1;
    }
    Ok(KmerComposition { order, entries })
}
