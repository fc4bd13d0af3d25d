//! Receiver-side synthesis: label inversion into targets, the duration
//! rule, control initialization and the hybrid renderer.
//!
//! The renderer mixes four sources (an additive harmonic bank, a modal bank
//! of band-centred sinusoids, body noise and a transient noise burst), each
//! under a linear-attack/exponential-decay envelope, applies broad spectral
//! shaping to the mix and normalizes the output to the RMS target. All
//! randomness comes from the code seed.

mod controls;
mod envelope;
mod harmonic;
mod synth;

pub use controls::{init_controls, ControlSpec, ControlVector, Scale, CONTROLS, CONTROL_COUNT, GAIN_FLOOR};
pub use envelope::Onset;
pub use harmonic::{allocate_partials, partial_frequency};

use crate::error::{LacError, Result};
use crate::features::{FeatureVector, Waveform, SAMPLE_RATE};
use crate::textcodec::LexicalCode;
use crate::vocab::{Family, FamilySet, FeatureId, Interval, Vocabulary, FEATURE_COUNT};

/// Attack time used when the code says no onset was observed.
pub const ATTACK_FALLBACK_S: f64 = 0.001;
/// Decay time used when the code says the sound does not decay.
pub const DECAY_FALLBACK_S: f64 = 0.5;
pub const MIN_DURATION_S: f64 = 0.05;
pub const MAX_DURATION_S: f64 = 5.0;

/// Decoded targets: one representative per feature plus the interval it
/// came from. Features outside the transmitted families carry neither and
/// are left to renderer defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Targets {
    values: FeatureVector,
    intervals: [Option<Interval>; FEATURE_COUNT],
    /// Seconds, from the log-attack representative or the fallback.
    pub attack_time_s: f64,
    /// Seconds, from the decay representative or the fallback.
    pub decay_time_s: f64,
}

impl Targets {
    /// Representative value; `None` for sentinels and unconstrained slots.
    pub fn value(&self, feature: FeatureId) -> Option<f64> {
        self.values.get(feature)
    }

    pub fn values(&self) -> &FeatureVector {
        &self.values
    }

    /// The target bin, or `None` when the feature was not transmitted.
    pub fn interval(&self, feature: FeatureId) -> Option<Interval> {
        self.intervals[feature.index()]
    }

    pub fn is_constrained(&self, feature: FeatureId) -> bool {
        self.intervals[feature.index()].is_some()
    }

    /// Whether the code asks for a decaying envelope. Unconstrained decay
    /// counts as decaying.
    pub fn decays(&self) -> bool {
        !matches!(self.interval(FeatureId::DECAY_TIME_S), Some(Interval::Undefined))
    }

    pub fn family(&self, family: Family) -> Vec<(FeatureId, Option<f64>)> {
        family.features().map(|f| (f, self.value(f))).collect()
    }

    pub fn temporal(&self) -> Vec<(FeatureId, Option<f64>)> {
        self.family(Family::Temporal)
    }

    pub fn spectral(&self) -> Vec<(FeatureId, Option<f64>)> {
        self.family(Family::Spectral)
    }

    pub fn harmonic(&self) -> Vec<(FeatureId, Option<f64>)> {
        self.family(Family::Harmonic)
    }

    pub fn bark(&self) -> Vec<(FeatureId, Option<f64>)> {
        self.family(Family::Bark)
    }

    pub fn psychoacoustic(&self) -> Vec<(FeatureId, Option<f64>)> {
        self.family(Family::Psychoacoustic)
    }

    /// Drops every feature outside `families`, as if it had not been sent.
    pub fn restrict(&self, families: FamilySet) -> Targets {
        let mut out = self.clone();
        for f in FeatureId::all().filter(|f| !families.includes(*f)) {
            out.values.set(f, None);
            out.intervals[f.index()] = None;
        }
        if !families.contains(Family::Temporal) {
            out.attack_time_s = ATTACK_FALLBACK_S;
            out.decay_time_s = DECAY_FALLBACK_S;
        }
        out
    }
}

/// Inverts every label of `code` to its representative and interval.
pub fn decode_targets(code: &LexicalCode, vocab: &Vocabulary) -> Result<Targets> {
    let mut values = FeatureVector::default();
    let mut intervals = [None; FEATURE_COUNT];
    for f in FeatureId::all() {
        let idx = code.index(f);
        if idx as usize >= vocab.alphabet_size(f) {
            return Err(LacError::UnknownLabel {
                feature: f.name().into(),
                label: format!("#{idx}"),
            });
        }
        let entry = vocab.entry(f, idx);
        values.set(f, entry.representative);
        intervals[f.index()] = Some(entry.interval);
    }
    let attack_time_s = values
        .get(FeatureId::LOG_ATTACK_TIME)
        .map_or(ATTACK_FALLBACK_S, |v| 10f64.powf(v));
    let decay_time_s = values.get(FeatureId::DECAY_TIME_S).unwrap_or(DECAY_FALLBACK_S);
    Ok(Targets {
        values,
        intervals,
        attack_time_s,
        decay_time_s,
    })
}

/// `attack + 4·decay`, clamped to the allowed duration range.
pub fn duration_of(targets: &Targets) -> f64 {
    (targets.attack_time_s + 4.0 * targets.decay_time_s).clamp(MIN_DURATION_S, MAX_DURATION_S)
}

/// Everything one render needs. The resolved envelope times and onset shape
/// are fixed at construction; only the controls change between renders.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    targets: Targets,
    controls: ControlVector,
    seed: u32,
    target_len: Option<usize>,
    duration_s: f64,
    len: usize,
    attack_s: f64,
    decay_s: f64,
    onset: Onset,
}

impl RenderSpec {
    pub fn new(targets: Targets, controls: ControlVector, seed: u32, target_len: Option<usize>) -> Result<RenderSpec> {
        let sr = SAMPLE_RATE as f64;
        let (attack_s, decay_s) = (targets.attack_time_s, targets.decay_time_s);
        if !(attack_s > 0.0 && decay_s > 0.0) || !attack_s.is_finite() || !decay_s.is_finite() {
            return Err(LacError::InvalidSpec(format!(
                "attack {attack_s} s and decay {decay_s} s must be positive"
            )));
        }
        let (duration_s, len, attack_s, decay_s) = match target_len {
            None => {
                let d = duration_of(&targets);
                (d, (d * sr).round() as usize, attack_s, decay_s)
            }
            Some(len) => {
                let d = len as f64 / sr;
                if !(MIN_DURATION_S..=MAX_DURATION_S).contains(&d) {
                    return Err(LacError::InvalidSpec(format!(
                        "target length {len} samples is outside [{MIN_DURATION_S}, {MAX_DURATION_S}] s"
                    )));
                }
                let k = d / (attack_s + 4.0 * decay_s);
                (d, len, attack_s * k, decay_s * k)
            }
        };
        let onset = envelope::calibrate(&targets, decay_s, len);
        Ok(RenderSpec {
            targets,
            controls,
            seed,
            target_len,
            duration_s,
            len,
            attack_s,
            decay_s,
            onset,
        })
    }

    pub fn with_controls(&self, controls: ControlVector) -> RenderSpec {
        RenderSpec {
            controls,
            ..self.clone()
        }
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    pub fn controls(&self) -> &ControlVector {
        &self.controls
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn target_len(&self) -> Option<usize> {
        self.target_len
    }

    pub fn duration_s(&self) -> f64 {
        self.duration_s
    }

    /// Output length in samples.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Attack and decay after any rescaling for `target_len`.
    pub fn envelope_times(&self) -> (f64, f64) {
        (self.attack_s, self.decay_s)
    }

    pub fn onset(&self) -> Onset {
        self.onset
    }
}

/// Renders the spec at 44.1 kHz. A pure function of the spec.
pub fn render(spec: &RenderSpec) -> Result<Waveform> {
    if spec.controls.values().iter().any(|v| v.is_nan()) {
        return Err(LacError::InvalidSpec("NaN in controls".into()));
    }
    Ok(Waveform::new(synth::render(spec), SAMPLE_RATE))
}
