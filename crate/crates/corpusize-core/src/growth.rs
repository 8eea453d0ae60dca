//! Cumulative token/type growth series over ordered sub-corpora.
//!
//! The order in which equal-sized sub-corpora are accumulated changes the
//! shape of the growth curve (though never its final point), so orderings
//! are explicit, citable values rather than an accident of iteration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::rng::SeededRng;
use crate::sampler::SubCorpus;
use crate::tokenizer::TypeInventory;

/// How a permutation of sub-corpora was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingPolicy {
    /// Most types first; ties broken by id, ascending.
    TypesDesc,
    /// Exactly the order the corpora were supplied in (manifest order).
    Manifest,
    /// Seeded shuffle, with optional fixed positions.
    PinnedShuffle,
}

/// A concrete accumulation order over domain ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    pub policy: OrderingPolicy,
    pub permutation: Vec<String>,
    /// Seed used by `PinnedShuffle`; absent for deterministic policies.
    pub seed: Option<u64>,
    /// 1-based position → pinned domain id, when pins were requested.
    pub pins: Option<BTreeMap<usize, String>>,
}

/// One prefix of the accumulation: N tokens seen, V distinct forms seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthPoint {
    pub cum_tokens: u64,
    pub cum_types: u64,
}

/// The full accumulation under one ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSeries {
    pub ordering: Ordering,
    pub points: Vec<GrowthPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthError {
    EmptyInput,
    /// A pin names a position outside 1..=len.
    PinOutOfRange {
        position: usize,
        len: usize,
    },
    /// A pin names a domain id that is not present.
    PinUnknownId {
        position: usize,
        id: String,
    },
    /// Two pins claim the same domain id.
    PinDuplicateId {
        id: String,
    },
    /// The ordering's permutation does not cover exactly the given corpora.
    CoverageMismatch,
}

impl core::fmt::Display for GrowthError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GrowthError::EmptyInput => write!(f, "no sub-corpora to order"),
            GrowthError::PinOutOfRange { position, len } => {
                write!(f, "pin position {position} outside 1..={len}")
            }
            GrowthError::PinUnknownId { position, id } => {
                write!(f, "pin at position {position} names unknown domain {id:?}")
            }
            GrowthError::PinDuplicateId { id } => {
                write!(f, "domain {id:?} is pinned to more than one position")
            }
            GrowthError::CoverageMismatch => {
                write!(f, "ordering does not cover the sub-corpora exactly")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GrowthError {}

/// Orders by sampled type total, descending; ids break ties ascending.
pub fn order_by_types_desc(stats: &[SubCorpus]) -> Result<Ordering, GrowthError> {
    if stats.is_empty() {
        return Err(GrowthError::EmptyInput);
    }
    let mut ranked: Vec<(&str, u64)> = stats
        .iter()
        .map(|s| (s.id.as_str(), s.inventory.type_total()))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(Ordering {
        policy: OrderingPolicy::TypesDesc,
        permutation: ranked.into_iter().map(|(id, _)| String::from(id)).collect(),
        seed: None,
        pins: None,
    })
}

/// Keeps the corpora exactly as supplied.
pub fn order_manifest(stats: &[SubCorpus]) -> Result<Ordering, GrowthError> {
    if stats.is_empty() {
        return Err(GrowthError::EmptyInput);
    }
    Ok(Ordering {
        policy: OrderingPolicy::Manifest,
        permutation: stats.iter().map(|s| s.id.clone()).collect(),
        seed: None,
        pins: None,
    })
}

/// Shuffles the corpora with the stable seeded generator, honouring pins.
///
/// Pins fix domain ids to 1-based positions; the remaining ids are
/// Fisher–Yates-shuffled and fill the free positions in shuffled order.
/// Pinning every position reproduces the pinned order regardless of seed.
pub fn order_pinned_shuffle(
    stats: &[SubCorpus],
    pins: &BTreeMap<usize, String>,
    seed: u64,
) -> Result<Ordering, GrowthError> {
    if stats.is_empty() {
        return Err(GrowthError::EmptyInput);
    }
    let len = stats.len();
    let known: BTreeSet<&str> = stats.iter().map(|s| s.id.as_str()).collect();
    let mut pinned_ids: BTreeSet<&str> = BTreeSet::new();
    for (&position, id) in pins {
        if position == 0 || position > len {
            return Err(GrowthError::PinOutOfRange { position, len });
        }
        if !known.contains(id.as_str()) {
            return Err(GrowthError::PinUnknownId {
                position,
                id: id.clone(),
            });
        }
        if !pinned_ids.insert(id.as_str()) {
            return Err(GrowthError::PinDuplicateId { id: id.clone() });
        }
    }

    let mut free: Vec<&str> = stats
        .iter()
        .map(|s| s.id.as_str())
        .filter(|id| !pinned_ids.contains(id))
        .collect();
    let mut rng = SeededRng::new(seed);
    rng.shuffle(&mut free);

    let mut slots: Vec<Option<String>> = alloc::vec![None; len];
    for (&position, id) in pins {
        slots[position - 1] = Some(id.clone());
    }
    let mut next_free = free.into_iter();
    let permutation = slots
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| String::from(next_free.next().expect("slot count"))))
        .collect();

    Ok(Ordering {
        policy: OrderingPolicy::PinnedShuffle,
        permutation,
        seed: Some(seed),
        pins: if pins.is_empty() {
            None
        } else {
            Some(pins.clone())
        },
    })
}

/// Accumulates inventories along `ordering` and reports each prefix's
/// (cumulative tokens, cumulative types).
///
/// Types accumulate through inventory union, so a prefix's `cum_types` is
/// the distinct-form count of everything seen so far — never the sum of
/// per-corpus type totals.
pub fn cumulative_series(
    stats: &[SubCorpus],
    ordering: &Ordering,
) -> Result<GrowthSeries, GrowthError> {
    let by_id: BTreeMap<&str, &SubCorpus> = stats.iter().map(|s| (s.id.as_str(), s)).collect();
    if by_id.len() != stats.len() || ordering.permutation.len() != stats.len() || stats.is_empty() {
        return Err(if stats.is_empty() {
            GrowthError::EmptyInput
        } else {
            GrowthError::CoverageMismatch
        });
    }
    let covered: BTreeSet<&str> = ordering.permutation.iter().map(String::as_str).collect();
    if covered.len() != stats.len() || !covered.iter().all(|id| by_id.contains_key(id)) {
        return Err(GrowthError::CoverageMismatch);
    }

    let mut acc = TypeInventory::new();
    let mut points = Vec::with_capacity(stats.len());
    for id in &ordering.permutation {
        acc.absorb(&by_id[id.as_str()].inventory);
        points.push(GrowthPoint {
            cum_tokens: acc.token_total(),
            cum_types: acc.type_total(),
        });
    }
    Ok(GrowthSeries {
        ordering: ordering.clone(),
        points,
    })
}
