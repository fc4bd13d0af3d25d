//! The analysis map from a mono waveform to the 47 descriptors.
//!
//! The same extractor serves the sender (analysis of the input sound) and
//! the receiver (re-analysis of each rendered candidate). Inputs are
//! converted to 44.1 kHz first; all other parameters are fixed.

mod audio;
pub mod harmonic;
pub mod pitch;
pub mod psycho;
pub mod spectrum;
pub mod temporal;

use std::fmt;

pub use audio::{read_wav, resample, write_wav, SampleFormat, WavInput, Waveform, MAX_DURATION_S, SAMPLE_RATE};

use crate::error::Result;
use crate::vocab::{Family, FeatureId, FEATURE_COUNT};
use spectrum::Spectrogram;
use temporal::Envelope;

/// One value per descriptor in canonical order; `None` marks an undefined
/// value (no pitch, no observable attack, no decay).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    values: [Option<f64>; FEATURE_COUNT],
}

impl Default for FeatureVector {
    fn default() -> Self {
        FeatureVector {
            values: [None; FEATURE_COUNT],
        }
    }
}

impl FeatureVector {
    pub fn from_values(values: [Option<f64>; FEATURE_COUNT]) -> FeatureVector {
        FeatureVector { values }
    }

    pub fn get(&self, feature: FeatureId) -> Option<f64> {
        self.values[feature.index()]
    }

    pub fn set(&mut self, feature: FeatureId, value: Option<f64>) {
        self.values[feature.index()] = value;
    }

    pub fn values(&self) -> &[Option<f64>; FEATURE_COUNT] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (FeatureId, Option<f64>)> + '_ {
        FeatureId::all().map(|f| (f, self.get(f)))
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, v) in self.iter() {
            match v {
                Some(v) => writeln!(f, "{:<26}{v:.6}", id.name())?,
                None => writeln!(f, "{:<26}undefined", id.name())?,
            }
        }
        Ok(())
    }
}

/// The coordinates of a single family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFeatures {
    pub family: Family,
    pub values: Vec<(FeatureId, Option<f64>)>,
}

impl FamilyFeatures {
    pub fn merge_into(&self, target: &mut FeatureVector) {
        for &(f, v) in &self.values {
            target.set(f, v);
        }
    }
}

/// Lazily shared intermediate results for one waveform.
struct Analysis<'a> {
    x: &'a [f64],
    sr: u32,
    spectrogram: std::cell::OnceCell<Spectrogram>,
}

impl<'a> Analysis<'a> {
    fn new(w: &'a Waveform) -> Analysis<'a> {
        Analysis {
            x: &w.samples,
            sr: w.sample_rate,
            spectrogram: std::cell::OnceCell::new(),
        }
    }

    fn spec(&self) -> &Spectrogram {
        self.spectrogram.get_or_init(|| Spectrogram::compute(self.x, self.sr))
    }

    fn temporal(&self) -> Vec<Option<f64>> {
        let env = Envelope::compute(self.x, self.sr);
        let attack = env.attack(self.sr);
        vec![
            Some(temporal::rms(self.x)),
            Some(temporal::crest_factor_db(self.x)),
            Some(temporal::zero_crossing_rate(self.x, self.sr)),
            attack.map(|a| a.log_attack_time),
            attack.map(|a| a.slope_db_s),
            Some(env.temporal_centroid()),
            env.decay_time_s(),
        ]
    }

    fn spectral(&self) -> Vec<Option<f64>> {
        let spec = self.spec();
        let bin_hz = spec.bin_hz(1);
        let mean_mag = spec.mean_magnitude();
        vec![
            Some(spec.centroid_hz()),
            Some(spec.flatness()),
            Some(spec.rolloff_hz(0.85)),
            Some(spec.flux()),
            Some(spectrum::kurtosis(&mean_mag, bin_hz)),
            Some(spectrum::entropy(&spec.mean_power())),
            Some(spectrum::irregularity(&mean_mag)),
        ]
    }

    fn harmonic(&self) -> Vec<Option<f64>> {
        let track = pitch::track(self.x, self.sr);
        let f0 = track.median_f0().filter(|_| track.is_pitched());
        let Some(f0) = f0 else {
            return vec![None; 7];
        };
        let h = harmonic::analyze(self.x, self.sr, f0);
        vec![
            Some(f0),
            track.hnr_db(),
            Some(h.inharmonicity),
            Some(h.tristimulus[0]),
            Some(h.tristimulus[1]),
            Some(h.tristimulus[2]),
            Some(h.odd_even_ratio),
        ]
    }

    fn bark(&self) -> Vec<Option<f64>> {
        self.spec().bark_band_powers().iter().map(|p| Some(p.ln_1p())).collect()
    }

    fn psychoacoustic(&self) -> Vec<Option<f64>> {
        let spec = self.spec();
        vec![
            Some(psycho::sharpness_acum(&spec.bark_band_powers())),
            Some(psycho::roughness(&spec.mean_magnitude(), spec.bin_hz(1))),
        ]
    }

    fn family(&self, family: Family) -> FamilyFeatures {
        let values = match family {
            Family::Temporal => self.temporal(),
            Family::Spectral => self.spectral(),
            Family::Harmonic => self.harmonic(),
            Family::Bark => self.bark(),
            Family::Psychoacoustic => self.psychoacoustic(),
        };
        FamilyFeatures {
            family,
            values: family.features().zip(values).collect(),
        }
    }
}

/// Computes all 47 descriptors. The input is checked (non-empty, finite, at
/// most five seconds) and converted to 44.1 kHz. Silence is valid input and
/// yields zero levels with undefined attack, decay and pitch.
pub fn extract(w: &Waveform) -> Result<FeatureVector> {
    w.check()?;
    let canonical = w.canonical();
    let analysis = Analysis::new(&canonical);
    let mut out = FeatureVector::default();
    for family in Family::ALL {
        analysis.family(family).merge_into(&mut out);
    }
    Ok(out)
}

/// Computes one family's descriptors only.
pub fn extract_family(w: &Waveform, family: Family) -> Result<FamilyFeatures> {
    w.check()?;
    let canonical = w.canonical();
    Ok(Analysis::new(&canonical).family(family))
}

#[cfg(test)]
mod tests;
