//! FASTA input and output for single genomes.

use std::fs;
use std::io::Write;
use std::path::Path;

use asmdist::seqcore::{CircularSequence, Symbol};

use crate::error::{CliError, Result};

struct Record {
    name: String,
    /// Sequence text with its 0-based offset in the record.
    seq: Vec<u8>,
}

fn records(text: &str) -> Vec<Record> {
    let mut out: Vec<Record> = Vec::new();
    for line in text.lines() {
        let line = line.trim_end();
        if let Some(header) = line.strip_prefix('>') {
            out.push(Record { name: header.to_string(), seq: Vec::new() });
        } else if let Some(r) = out.last_mut() {
            r.seq.extend(line.bytes().filter(|b| !b.is_ascii_whitespace()));
        } else if !line.trim().is_empty() && !line.starts_with(';') {
            // sequence before any header: treat as an unnamed record
            out.push(Record { name: String::new(), seq: line.bytes().collect() });
        }
    }
    out
}

/// Reads one record of a FASTA file as a circular genome.
///
/// With several records, `record` selects one by its identifier (the header
/// up to the first whitespace) or by its full header line. Sequences are
/// upper-cased; any symbol outside ACGT is rejected with its offset.
pub fn ingest_fasta(path: &Path, record: Option<&str>) -> Result<CircularSequence> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let fail = |msg: String| CliError::Fasta { path: path.to_path_buf(), msg };
    let all = records(&text);
    let chosen = match (record, all.len()) {
        (_, 0) => return Err(fail("no FASTA records".into())),
        (None, 1) => &all[0],
        (None, n) => return Err(fail(format!("{n} records; select one with --record"))),
        (Some(want), _) => all
            .iter()
            .find(|r| r.name == want || r.name.split_whitespace().next() == Some(want))
            .ok_or_else(|| fail(format!("no record named {want:?}")))?,
    };
    let mut symbols = Vec::with_capacity(chosen.seq.len());
    for (offset, &b) in chosen.seq.iter().enumerate() {
        let c = (b as char).to_ascii_uppercase();
        let sym = Symbol::from_char(c).ok_or_else(|| CliError::InvalidSymbol {
            path: path.to_path_buf(),
            record: chosen.name.clone(),
            offset,
            symbol: b as char,
        })?;
        symbols.push(sym);
    }
    if symbols.is_empty() {
        return Err(fail(format!("record {:?} is empty", chosen.name)));
    }
    Ok(CircularSequence::new(symbols)?)
}

/// Writes `s` as a single FASTA record with 80-column lines.
pub fn write_fasta<W: Write>(out: &mut W, name: &str, s: &CircularSequence) -> std::io::Result<()> {
    writeln!(out, ">{name}")?;
    let text: Vec<u8> = s.symbols().iter().map(|c| c.to_char() as u8).collect();
    for line in text.chunks(80) {
        out.write_all(line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
