//! The sentence channel: lexical codes, their canonical token form and
//! seed, the verbalizer and the parser.

mod parse;
mod verbalize;

use sha2::{Digest, Sha256};

pub use parse::{parse, scan, Parser, PartialCode};
pub use verbalize::{verbalize, verbalize_clauses};

use crate::error::{LacError, Result};
use crate::features::{FeatureVector, Waveform};
use crate::vocab::{Family, FeatureId, LabelIndex, Vocabulary, FEATURE_COUNT};

/// One label per descriptor, stored as positions in the feature alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexicalCode {
    bins: [LabelIndex; FEATURE_COUNT],
}

impl LexicalCode {
    pub fn from_indices(vocab: &Vocabulary, bins: [LabelIndex; FEATURE_COUNT]) -> Result<LexicalCode> {
        for f in FeatureId::all() {
            if bins[f.index()] as usize >= vocab.alphabet_size(f) {
                return Err(LacError::IndexOutOfRange(format!("{f} label {}", bins[f.index()])));
            }
        }
        Ok(LexicalCode { bins })
    }

    /// Quantizes every coordinate of a feature vector.
    pub fn from_features(vocab: &Vocabulary, features: &FeatureVector) -> Result<LexicalCode> {
        let mut bins = [0; FEATURE_COUNT];
        for (f, v) in features.iter() {
            bins[f.index()] = vocab.quantize(f, v)?;
        }
        Ok(LexicalCode { bins })
    }

    /// Builds a code from 47 label strings in canonical order.
    pub fn from_labels(vocab: &Vocabulary, labels: &[&str]) -> Result<LexicalCode> {
        if labels.len() != FEATURE_COUNT {
            return Err(LacError::InvalidConfig(format!(
                "expected {FEATURE_COUNT} labels, got {}",
                labels.len()
            )));
        }
        let mut bins = [0; FEATURE_COUNT];
        for (f, label) in FeatureId::all().zip(labels) {
            bins[f.index()] = vocab.label_index(f, label)?;
        }
        Ok(LexicalCode { bins })
    }

    pub fn index(&self, feature: FeatureId) -> LabelIndex {
        self.bins[feature.index()]
    }

    pub fn indices(&self) -> &[LabelIndex; FEATURE_COUNT] {
        &self.bins
    }

    pub fn with(mut self, feature: FeatureId, index: LabelIndex) -> LexicalCode {
        self.bins[feature.index()] = index;
        self
    }

    pub fn label<'v>(&self, vocab: &'v Vocabulary, feature: FeatureId) -> &'v str {
        &vocab.entry(feature, self.index(feature)).label
    }

    pub fn labels<'v>(&self, vocab: &'v Vocabulary) -> Vec<&'v str> {
        FeatureId::all().map(|f| self.label(vocab, f)).collect()
    }

    pub fn is_sentinel(&self, vocab: &Vocabulary, feature: FeatureId) -> bool {
        vocab.sentinel(feature) == Some(self.index(feature))
    }

    /// Whether every harmonic-family slot holds its `unpitched` sentinel.
    pub fn is_unpitched(&self, vocab: &Vocabulary) -> bool {
        Family::Harmonic.features().all(|f| self.is_sentinel(vocab, f))
    }
}

/// `feature=label` tokens in canonical order, joined by `;`. This string is
/// the hash preimage and the paraphrase-invariant identity of a code.
pub fn canonical_tokens(vocab: &Vocabulary, code: &LexicalCode) -> String {
    FeatureId::all()
        .map(|f| format!("{}={}", f.name(), code.label(vocab, f)))
        .collect::<Vec<_>>()
        .join(";")
}

/// First four bytes of the SHA-256 of the canonical tokens, big-endian.
pub fn seed_of(vocab: &Vocabulary, code: &LexicalCode) -> u32 {
    let digest = Sha256::digest(canonical_tokens(vocab, code).as_bytes());
    u32::from_be_bytes([digest[0], digest[1], digest[2], digest[3]])
}

/// Sender side of the codec: analysis, quantization and verbalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoded {
    pub features: FeatureVector,
    pub code: LexicalCode,
    pub sentence: String,
}

pub fn encode(vocab: &Vocabulary, waveform: &Waveform) -> Result<Encoded> {
    let features = crate::features::extract(waveform)?;
    let code = LexicalCode::from_features(vocab, &features)?;
    let sentence = verbalize(vocab, &code);
    Ok(Encoded {
        features,
        code,
        sentence,
    })
}
