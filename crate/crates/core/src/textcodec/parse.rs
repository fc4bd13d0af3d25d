//! Label-spotting parser.
//!
//! Text is lowercased and split into words; hyphens, underscores,
//! apostrophes and whitespace separate words, while any other punctuation
//! also ends a phrase. At each word the longest run that spells a label is
//! taken. Normalized labels are globally unique, so the feature of every
//! match is known without looking at the surrounding prose.

use std::collections::{BTreeSet, HashMap};

use super::LexicalCode;
use crate::error::{LacError, Result};
use crate::vocab::{normalize_label, Family, FeatureId, LabelIndex, Vocabulary, FEATURE_COUNT, UNPITCHED};

#[derive(Debug, Clone, Copy)]
enum Target {
    Label(FeatureId, LabelIndex),
    /// Bare `unpitched`: every harmonic slot.
    AllUnpitched,
    /// `unpitched <feature name>`: one harmonic slot.
    Unpitched(FeatureId),
}

/// Reusable phrase index over one vocabulary.
#[derive(Debug, Clone)]
pub struct Parser {
    phrases: HashMap<String, Target>,
    max_words: usize,
    sentinels: [Option<LabelIndex>; FEATURE_COUNT],
}

/// Labels found in a text, possibly incomplete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCode {
    slots: [Option<LabelIndex>; FEATURE_COUNT],
}

impl PartialCode {
    pub fn get(&self, feature: FeatureId) -> Option<LabelIndex> {
        self.slots[feature.index()]
    }

    pub fn missing(&self) -> Vec<FeatureId> {
        FeatureId::all().filter(|f| self.get(*f).is_none()).collect()
    }

    pub fn complete(&self, vocab: &Vocabulary) -> Result<LexicalCode> {
        let missing = self.missing();
        if !missing.is_empty() {
            return Err(LacError::MissingLabels(
                missing.iter().map(|f| f.name().to_string()).collect(),
            ));
        }
        LexicalCode::from_indices(vocab, self.slots.map(|s| s.expect("checked above")))
    }
}

fn is_soft_separator(c: char) -> bool {
    c.is_whitespace() || c == '-' || c == '_' || c == '\''
}

impl Parser {
    pub fn new(vocab: &Vocabulary) -> Parser {
        let mut phrases = HashMap::new();
        let mut sentinels = [None; FEATURE_COUNT];
        for f in FeatureId::all() {
            sentinels[f.index()] = vocab.sentinel(f);
            for (i, e) in vocab.entries(f).iter().enumerate() {
                let key = normalize_label(&e.label);
                if key == UNPITCHED {
                    continue;
                }
                phrases.insert(key, Target::Label(f, i as LabelIndex));
            }
        }
        phrases.insert(UNPITCHED.to_string(), Target::AllUnpitched);
        for f in Family::Harmonic.features() {
            phrases.insert(
                format!("{UNPITCHED} {}", normalize_label(f.name())),
                Target::Unpitched(f),
            );
        }
        let max_words = phrases.keys().map(|k| k.split(' ').count()).max().unwrap_or(1);
        Parser {
            phrases,
            max_words,
            sentinels,
        }
    }

    /// Finds every label in `text`. Fails on non-printable input and when
    /// two different labels of one feature both occur.
    pub fn scan(&self, text: &str) -> Result<PartialCode> {
        if text
            .chars()
            .any(|c| !c.is_ascii() || (c.is_ascii_control() && !c.is_ascii_whitespace()))
        {
            return Err(LacError::NonPrintable);
        }
        let mut slots: [Option<LabelIndex>; FEATURE_COUNT] = [None; FEATURE_COUNT];
        let mut conflicts = BTreeSet::new();
        let mut assign = |f: FeatureId, idx: LabelIndex| match slots[f.index()] {
            Some(prev) if prev != idx => {
                conflicts.insert(f);
            }
            _ => slots[f.index()] = Some(idx),
        };
        for segment in text.split(|c: char| !c.is_ascii_alphanumeric() && !is_soft_separator(c)) {
            let words: Vec<String> = segment
                .split(is_soft_separator)
                .filter(|w| !w.is_empty())
                .map(str::to_ascii_lowercase)
                .collect();
            let mut i = 0;
            while i < words.len() {
                let longest = self.max_words.min(words.len() - i);
                let hit = (1..=longest)
                    .rev()
                    .find_map(|n| self.phrases.get(&words[i..i + n].join(" ")).map(|t| (n, *t)));
                match hit {
                    Some((n, target)) => {
                        match target {
                            Target::Label(f, idx) => assign(f, idx),
                            Target::AllUnpitched => {
                                for f in Family::Harmonic.features() {
                                    if let Some(s) = self.sentinels[f.index()] {
                                        assign(f, s);
                                    }
                                }
                            }
                            Target::Unpitched(f) => {
                                if let Some(s) = self.sentinels[f.index()] {
                                    assign(f, s);
                                }
                            }
                        }
                        i += n;
                    }
                    None => i += 1,
                }
            }
        }
        if !conflicts.is_empty() {
            return Err(LacError::ConflictingLabels(
                conflicts.iter().map(|f| f.name().to_string()).collect(),
            ));
        }
        Ok(PartialCode { slots })
    }

    /// Recovers the full 47-slot code; every feature must be named exactly
    /// once (repeats of the same label are fine).
    pub fn parse(&self, vocab: &Vocabulary, text: &str) -> Result<LexicalCode> {
        self.scan(text)?.complete(vocab)
    }
}

/// One-shot [`Parser::scan`].
pub fn scan(vocab: &Vocabulary, text: &str) -> Result<PartialCode> {
    Parser::new(vocab).scan(text)
}

/// One-shot [`Parser::parse`].
pub fn parse(vocab: &Vocabulary, text: &str) -> Result<LexicalCode> {
    Parser::new(vocab).parse(vocab, text)
}
