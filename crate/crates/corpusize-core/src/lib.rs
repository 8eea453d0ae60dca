//! Core routines for corpus-size analysis: word-form tokenization, seeded
//! down-sampling, vocabulary growth curves, Heaps'-law fitting, and
//! type-token-ratio projection.
//!
//! The crate is `no_std`-compatible (it depends on `alloc` only). Enable the
//! `libm` feature to supply the float math when building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("corpusize-core needs either the `std` or the `libm` feature for float math");

extern crate alloc;

mod float;

pub mod growth;
pub mod heaps;
pub mod projection;
pub mod rng;
pub mod sampler;
pub mod segment;
pub mod tokenizer;

pub use growth::{
    cumulative_series, order_by_types_desc, order_manifest, order_pinned_shuffle, GrowthError,
    GrowthPoint, GrowthSeries, Ordering, OrderingPolicy,
};
pub use heaps::{eval_heaps, fit_heaps, fit_points, FitError, HeapsParams};
pub use projection::{
    project, recommend_size, ProjectionError, ProjectionGrid, ProjectionRow, RecommendMode,
    Recommendation,
};
pub use rng::{fnv1a_64, SeededRng};
pub use sampler::{downsample, SampleError, SampleSpec, SampleUnit, SubCorpus};
pub use segment::{segment_units, UnitMode};
pub use tokenizer::{
    build_inventory, merge_inventories, tokenize, DigitPolicy, PunctuationPolicy, TokenRules,
    TokenSequence, TypeInventory,
};
