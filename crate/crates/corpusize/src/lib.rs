//! Corpus ingestion, reporting, and the `corpusize` command-line tool.
//!
//! The numeric pipeline (tokenization, sampling, growth, fitting,
//! projection) lives in `corpusize-core`; this crate adds the parts that
//! need an operating system: manifest loading, file decoding, CSV/JSON
//! writers, SVG charts, and the CLI itself.

pub mod cli;
pub mod ingest;
pub mod report;
pub mod svg;

pub use corpusize_core as core;
