//! Command-line front end: FASTA ingestion, experiment subcommands and
//! CSV/JSON output with a reproducibility header.

pub mod args;
pub mod commands;
pub mod error;
pub mod fasta;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;

use clap::Parser;

use crate::args::{resolve, Cli, LARGE_GENOME};
use crate::error::{CliError, Result};

/// Runs one invocation and returns the rendered output text.
pub fn run(cli: &Cli) -> Result<String> {
    let opts = cli.command.opts();
    let s = fasta::ingest_fasta(&opts.genome, opts.record.as_deref())?;
    let mut config = resolve(&cli.command, s.len())?;
    if config.large || s.len() > LARGE_GENOME {
        let mb = commands::memory_estimate(&config) as f64 / 1e6;
        eprintln!("asmdist: {} on {} bp, estimated peak memory {mb:.0} MB", config.command, s.len());
    }
    let doc = commands::run(&cli.command, &s, &mut config)?;
    Ok(output::render(&doc, &config))
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli).and_then(|text| match &cli.command.opts().out {
        Some(path) => {
            let file = File::create(path).map_err(CliError::Output)?;
            output::write_to(&mut BufWriter::new(file), &text).map_err(CliError::Output)
        }
        None => output::write_to(&mut std::io::stdout().lock(), &text).map_err(CliError::Output),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("asmdist: {e}");
            e.exit_code()
        }
    }
}
