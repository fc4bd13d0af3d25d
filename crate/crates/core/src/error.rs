use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the encode/decode pipeline.
#[derive(Debug, Error)]
pub enum LacError {
    #[error("vocabulary file line {line}: {message}")]
    VocabularyFormat { line: usize, message: String },

    #[error("vocabulary is inconsistent: {0}")]
    VocabularyInvalid(String),

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("feature `{feature}` has no label `{label}`")]
    UnknownLabel { feature: String, label: String },

    #[error("feature `{0}` has no sentinel bin for an undefined value")]
    NoSentinel(String),

    #[error("value {value} of feature `{feature}` falls in no bin")]
    OutOfRange { feature: String, value: f64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("sentence is missing labels for: {}", .0.join(", "))]
    MissingLabels(Vec<String>),

    #[error("sentence carries conflicting labels for: {}", .0.join(", "))]
    ConflictingLabels(Vec<String>),

    #[error("sentence contains non-printable or non-ASCII characters")]
    NonPrintable,

    #[error("invalid render spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Wav {
        path: PathBuf,
        #[source]
        source: hound::Error,
    },
}

pub type Result<T> = std::result::Result<T, LacError>;
