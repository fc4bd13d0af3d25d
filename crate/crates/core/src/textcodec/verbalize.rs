//! Template verbalizer. Every label appears verbatim (hyphens may read as
//! spaces), and any two labels are separated by punctuation or by filler
//! words that occur in no label, so the parser can recover each term.

use super::LexicalCode;
use crate::vocab::{Family, FeatureId, Vocabulary, UNPITCHED};

enum Piece {
    Text(&'static str),
    Slot(FeatureId),
}

use Piece::{Slot, Text};

fn temporal() -> Vec<Piece> {
    vec![
        Text("A "),
        Slot(FeatureId::RMS_ENERGY),
        Text(" sound, "),
        Slot(FeatureId::CREST_FACTOR_DB),
        Text(", with "),
        Slot(FeatureId::ZERO_CROSSING_RATE),
        Text(" motion, a "),
        Slot(FeatureId::LOG_ATTACK_TIME),
        Text(" and a "),
        Slot(FeatureId::ATTACK_SLOPE_DB_S),
        Text(" rise, "),
        Slot(FeatureId::TEMPORAL_CENTROID),
        Text(" over time and a "),
        Slot(FeatureId::DECAY_TIME_S),
        Text(" tail."),
    ]
}

fn spectral() -> Vec<Piece> {
    vec![
        Text("Its spectrum is "),
        Slot(FeatureId::SPECTRAL_CENTROID_HZ),
        Text(" and "),
        Slot(FeatureId::SPECTRAL_FLATNESS),
        Text(", with a "),
        Slot(FeatureId::SPECTRAL_ROLLOFF_HZ),
        Text(" and "),
        Slot(FeatureId::SPECTRAL_FLUX),
        Text(" movement, a "),
        Slot(FeatureId::SPECTRAL_KURTOSIS),
        Text(" shape, "),
        Slot(FeatureId::SPECTRAL_ENTROPY),
        Text(" texture and a "),
        Slot(FeatureId::SPECTRAL_IRREGULARITY),
        Text(" outline."),
    ]
}

fn pitched() -> Vec<Piece> {
    vec![
        Text("Pitched at "),
        Slot(FeatureId::F0_HZ),
        Text(", it is "),
        Slot(FeatureId::HARMONIC_NOISE_RATIO_DB),
        Text(" and "),
        Slot(FeatureId::INHARMONICITY),
        Text(", "),
        Slot(FeatureId::TRISTIMULUS_1),
        Text(", "),
        Slot(FeatureId::TRISTIMULUS_2),
        Text(" and "),
        Slot(FeatureId::TRISTIMULUS_3),
        Text(", "),
        Slot(FeatureId::ODD_EVEN_HARMONIC_RATIO),
        Text(" in its partials."),
    ]
}

fn mixed_harmonic() -> Vec<Piece> {
    let mut pieces = vec![Text("Harmonically it has ")];
    let features: Vec<FeatureId> = Family::Harmonic.features().collect();
    for (i, &f) in features.iter().enumerate() {
        if i > 0 {
            pieces.push(Text(if i + 1 == features.len() { " and " } else { ", " }));
        }
        pieces.push(Slot(f));
    }
    pieces.push(Text("."));
    pieces
}

fn bark() -> Vec<Piece> {
    let mut pieces = vec![Text("Across the bands: ")];
    for band in 1..=24 {
        if band > 1 {
            pieces.push(Text(if band == 24 { " and " } else { ", " }));
        }
        pieces.push(Slot(FeatureId::bark(band).expect("band in range")));
    }
    pieces.push(Text("."));
    pieces
}

fn psychoacoustic() -> Vec<Piece> {
    vec![
        Text("Overall it feels "),
        Slot(FeatureId::SHARPNESS_ACUM),
        Text(" and "),
        Slot(FeatureId::ROUGHNESS),
        Text("."),
    ]
}

/// Every filler word used by the templates, for vocabulary checks.
#[cfg(test)]
pub(crate) fn filler_words() -> Vec<String> {
    let all = [
        temporal(),
        spectral(),
        pitched(),
        mixed_harmonic(),
        bark(),
        psychoacoustic(),
    ];
    let mut words: Vec<String> = all
        .iter()
        .flatten()
        .filter_map(|p| match p {
            Text(t) => Some(crate::vocab::normalize_label(t)),
            Slot(_) => None,
        })
        .flat_map(|t| t.split(' ').map(str::to_string).collect::<Vec<_>>())
        .filter(|w| !w.is_empty())
        .collect();
    words.push("an".into());
    words.sort();
    words.dedup();
    words
}

fn slot_text(vocab: &Vocabulary, code: &LexicalCode, f: FeatureId) -> String {
    let label = code.label(vocab, f);
    if f.family() == Family::Harmonic && code.is_sentinel(vocab, f) {
        return format!("{UNPITCHED} {}", f.name().replace('_', " "));
    }
    if f == FeatureId::LOG_ATTACK_TIME || f == FeatureId::DECAY_TIME_S {
        return label.replace('-', " ");
    }
    label.to_string()
}

fn starts_with_vowel(text: &str) -> bool {
    text.starts_with(['a', 'e', 'i', 'o', 'u', 'A', 'E', 'I', 'O', 'U'])
}

fn render(vocab: &Vocabulary, code: &LexicalCode, pieces: &[Piece]) -> String {
    let mut out = String::new();
    for p in pieces {
        match p {
            Text(t) => out.push_str(t),
            Slot(f) => {
                let text = slot_text(vocab, code, *f);
                let article = out.ends_with(" a ") || out == "A ";
                if article && starts_with_vowel(&text) {
                    out.insert(out.len() - 1, 'n');
                }
                out.push_str(&text);
            }
        }
    }
    out
}

/// The five family clauses in canonical order. Any permutation of them is
/// an equally valid sentence for the same code.
pub fn verbalize_clauses(vocab: &Vocabulary, code: &LexicalCode) -> Vec<String> {
    let harmonic = if code.is_unpitched(vocab) {
        format!("It is {UNPITCHED}.")
    } else if Family::Harmonic.features().any(|f| code.is_sentinel(vocab, f)) {
        render(vocab, code, &mixed_harmonic())
    } else {
        render(vocab, code, &pitched())
    };
    vec![
        render(vocab, code, &temporal()),
        render(vocab, code, &spectral()),
        harmonic,
        render(vocab, code, &bark()),
        render(vocab, code, &psychoacoustic()),
    ]
}

/// Deterministic English sentence carrying every label of the code.
pub fn verbalize(vocab: &Vocabulary, code: &LexicalCode) -> String {
    verbalize_clauses(vocab, code).join(" ")
}
