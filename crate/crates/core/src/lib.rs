//! Lexical acoustic coding.
//!
//! A sound is described by 47 acoustic descriptors, each quantized into a
//! named interval of a shared vocabulary, and transmitted as a plain English
//! sentence. The receiver parses the sentence back into the lexical code,
//! renders a waveform from it and refines the renderer's controls until the
//! re-analyzed waveform lands inside as many transmitted intervals as
//! possible.

mod dsp;
pub mod error;
pub mod eval;
pub mod features;
pub mod refine;
pub mod renderer;
pub mod textcodec;
pub mod vocab;

pub use error::{LacError, Result};
pub use features::{extract, FeatureVector, Waveform};
pub use refine::{decode, RefineConfig};
pub use textcodec::{encode, LexicalCode};
pub use vocab::{Family, FamilySet, FeatureId, Interval, Vocabulary};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct IntroductionChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/vocabulary.md")]
pub struct VocabularyChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/features.md")]
pub struct FeaturesChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/sentences.md")]
pub struct SentencesChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rendering.md")]
pub struct RenderingChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/refinement.md")]
pub struct RefinementChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/evaluation.md")]
pub struct EvaluationChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub struct CliChapter;
