//! Seeded down-sampling of a domain to a common token budget.
//!
//! Every domain is cut to the same size before growth curves are built, so
//! that no sub-corpus dominates the cumulation by sheer length. Units are
//! drawn uniformly without replacement until the budget is reached.

use alloc::string::String;
use alloc::vec::Vec;

use crate::rng::SeededRng;
use crate::tokenizer::{TokenSequence, TypeInventory};

/// The kind of unit offered to the sampler.
///
/// `Line` and `Sentence` both mean "draw whole units as given" — the
/// distinction records how the units were segmented upstream. `Token`
/// flattens the units and draws individual tokens, which makes the sampled
/// size exact instead of overshooting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleUnit {
    Line,
    Sentence,
    Token,
}

/// Down-sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpec {
    /// Token budget per domain; must be at least 1.
    pub target_tokens: u64,
    pub unit: SampleUnit,
    /// Run seed. The sampler derives the per-domain stream from it (see
    /// [`SeededRng::for_domain`]), so one run seed governs all domains.
    pub seed: u64,
}

/// One domain after sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubCorpus {
    pub id: String,
    pub inventory: TypeInventory,
    /// Indices of the retained draws, in draw order — unit indices for
    /// line/sentence sampling, flattened token indices for token sampling.
    /// Kept for auditability of a given seed's selection.
    pub sampled_units: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleError {
    /// The domain holds fewer tokens than the requested budget.
    InsufficientTokens { available: u64, requested: u64 },
}

impl core::fmt::Display for SampleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SampleError::InsufficientTokens {
                available,
                requested,
            } => write!(
                f,
                "domain holds {available} tokens but {requested} were requested"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SampleError {}

/// Draws from `units` until the cumulative token count reaches
/// `spec.target_tokens`, then stops.
///
/// Whole-unit modes stop at the first draw that makes the total ≥ target,
/// so the result overshoots by less than the last-added unit's length;
/// token mode lands on the target exactly. The selection is a pure function
/// of `(domain_id, units, spec)`: the per-domain generator is
/// `SeededRng::for_domain(spec.seed, domain_id)` and draws use an
/// incremental Fisher–Yates walk, one bounded draw per retained index.
///
/// Units that tokenized to nothing can be drawn (they add zero tokens) and
/// are recorded like any other draw.
///
/// # Panics
/// Panics if `spec.target_tokens` is zero.
pub fn downsample(
    domain_id: &str,
    units: &[TokenSequence],
    spec: &SampleSpec,
) -> Result<SubCorpus, SampleError> {
    assert!(spec.target_tokens >= 1, "target_tokens must be at least 1");
    let available: u64 = units.iter().map(|u| u.len() as u64).sum();
    if available < spec.target_tokens {
        return Err(SampleError::InsufficientTokens {
            available,
            requested: spec.target_tokens,
        });
    }

    let mut rng = SeededRng::for_domain(spec.seed, domain_id);
    let mut inventory = TypeInventory::new();
    let mut sampled_units = Vec::new();

    match spec.unit {
        SampleUnit::Line | SampleUnit::Sentence => {
            let mut pool: Vec<usize> = (0..units.len()).collect();
            let mut cum = 0u64;
            for t in 0..pool.len() {
                let j = t + rng.bounded((pool.len() - t) as u64) as usize;
                pool.swap(t, j);
                let chosen = pool[t];
                sampled_units.push(chosen);
                for token in &units[chosen].tokens {
                    inventory.record(token);
                }
                cum += units[chosen].len() as u64;
                if cum >= spec.target_tokens {
                    break;
                }
            }
        }
        SampleUnit::Token => {
            let flat: Vec<&str> = units
                .iter()
                .flat_map(|u| u.tokens.iter().map(String::as_str))
                .collect();
            let mut pool: Vec<usize> = (0..flat.len()).collect();
            for t in 0..spec.target_tokens as usize {
                let j = t + rng.bounded((pool.len() - t) as u64) as usize;
                pool.swap(t, j);
                let chosen = pool[t];
                sampled_units.push(chosen);
                inventory.record(flat[chosen]);
            }
        }
    }

    Ok(SubCorpus {
        id: String::from(domain_id),
        inventory,
        sampled_units,
    })
}
