//! Sequence graphs, greedy read merging and Eulerian-cycle distortion for
//! partial assembly of a circular genome from error-free reads.
//!
//! Positions are 1-based and circular throughout.

mod error;
pub mod coverage;
pub mod distortion;
pub mod greedy;
pub mod par;
pub mod repeats;
pub mod seqcore;
pub mod seqgraph;
pub mod synth;

pub use error::{Error, Result};
