//! Word-form tokenization and type inventories.
//!
//! A token is a maximal run of non-whitespace characters; a type is a
//! distinct surface form. Counting is configured by [`TokenRules`]:
//! the defaults strip clinging punctuation, split on internal slashes,
//! and drop tokens that consist solely of ASCII digits.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// What to do with tokens made up entirely of the characters `0-9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitPolicy {
    /// Drop pure-digit tokens ("2019"); keep mixed forms ("33-р").
    ExcludePureDigitTokens,
    /// Count digit tokens like any other form.
    KeepAll,
}

/// What to do with punctuation clinging to a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunctuationPolicy {
    /// Remove leading/trailing non-alphanumeric characters and split the
    /// token at internal `/` characters ("1/Улсын" → "1", "Улсын").
    Strip,
    /// Keep each whitespace-delimited chunk exactly as written.
    KeepAttached,
}

/// Tokenization switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenRules {
    pub digit_policy: DigitPolicy,
    pub punctuation_policy: PunctuationPolicy,
    /// Lowercase every token. Off by default: corpus text is rich in
    /// proper nouns and the analysis counts surface forms.
    pub case_fold: bool,
}

impl Default for TokenRules {
    fn default() -> Self {
        Self {
            digit_policy: DigitPolicy::ExcludePureDigitTokens,
            punctuation_policy: PunctuationPolicy::Strip,
            case_fold: false,
        }
    }
}

/// Tokens of one text, in reading order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Frequency map from surface form to occurrence count.
///
/// `token_total` is the running token count N; the number of distinct keys
/// is the type count V. Every stored count is at least one and the counts
/// sum to `token_total`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeInventory {
    counts: BTreeMap<String, u64>,
    token_total: u64,
}

impl TypeInventory {
    pub fn new() -> Self {
        Self::default()
    }

    /// N — number of tokens recorded.
    pub fn token_total(&self) -> u64 {
        self.token_total
    }

    /// V — number of distinct forms.
    pub fn type_total(&self) -> u64 {
        self.counts.len() as u64
    }

    /// Occurrences of one form (zero if absent).
    pub fn count(&self, form: &str) -> u64 {
        self.counts.get(form).copied().unwrap_or(0)
    }

    /// Form/count pairs in lexicographic form order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(form, &n)| (form.as_str(), n))
    }

    /// Records one token occurrence.
    pub fn record(&mut self, form: &str) {
        if let Some(n) = self.counts.get_mut(form) {
            *n += 1;
        } else {
            self.counts.insert(String::from(form), 1);
        }
        self.token_total += 1;
    }

    /// Adds every count of `other` into `self` (keywise sum).
    pub fn absorb(&mut self, other: &TypeInventory) {
        for (form, n) in &other.counts {
            if let Some(mine) = self.counts.get_mut(form) {
                *mine += n;
            } else {
                self.counts.insert(form.clone(), *n);
            }
        }
        self.token_total += other.token_total;
    }
}

/// Splits `text` into tokens under `rules`.
///
/// The input is cut at Unicode whitespace runs, then each raw chunk goes
/// through the punctuation policy, the digit policy, and (optionally) case
/// folding, in that order. Empty results are dropped, so the output never
/// contains an empty token. Empty input yields an empty sequence.
pub fn tokenize(text: &str, rules: &TokenRules) -> TokenSequence {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        match rules.punctuation_policy {
            PunctuationPolicy::Strip => {
                for part in raw.split('/') {
                    let form = part.trim_matches(|c: char| !c.is_alphanumeric());
                    push_token(&mut tokens, form, rules);
                }
            }
            PunctuationPolicy::KeepAttached => push_token(&mut tokens, raw, rules),
        }
    }
    TokenSequence { tokens }
}

fn push_token(tokens: &mut Vec<String>, form: &str, rules: &TokenRules) {
    if form.is_empty() {
        return;
    }
    if rules.digit_policy == DigitPolicy::ExcludePureDigitTokens
        && form.chars().all(|c| c.is_ascii_digit())
    {
        return;
    }
    if rules.case_fold {
        tokens.push(form.to_lowercase());
    } else {
        tokens.push(String::from(form));
    }
}

/// Counts the multiplicity of every form in `seq`.
pub fn build_inventory(seq: &TokenSequence) -> TypeInventory {
    let mut inv = TypeInventory::new();
    for token in &seq.tokens {
        inv.record(token);
    }
    inv
}

/// Keywise sum of two inventories. The merged type total is the size of
/// the key union — the reason cumulative type counts cannot be obtained
/// by adding per-corpus type totals.
pub fn merge_inventories(a: &TypeInventory, b: &TypeInventory) -> TypeInventory {
    let mut out = a.clone();
    out.absorb(b);
    out
}
