//! The 15 renderer controls, their boxes and the deterministic start point.

use std::fmt;

use super::Targets;
use crate::error::{LacError, Result};
use crate::vocab::FeatureId;

pub const CONTROL_COUNT: usize = 15;

/// Gain given to a source layer the targets do not call for.
pub const GAIN_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// Searched in log space, for positive ranges spanning decades.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSpec {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub scale: Scale,
}

impl ControlSpec {
    const fn linear(name: &'static str, min: f64, max: f64) -> ControlSpec {
        ControlSpec {
            name,
            min,
            max,
            scale: Scale::Linear,
        }
    }

    const fn log(name: &'static str, min: f64, max: f64) -> ControlSpec {
        ControlSpec {
            name,
            min,
            max,
            scale: Scale::Log,
        }
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }

    /// Position of `v` in the unit box.
    pub fn to_unit(&self, v: f64) -> f64 {
        let v = self.clamp(v);
        match self.scale {
            Scale::Linear => (v - self.min) / (self.max - self.min),
            Scale::Log => (v / self.min).ln() / (self.max / self.min).ln(),
        }
    }

    pub fn from_unit(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self.scale {
            Scale::Linear => self.min + u * (self.max - self.min),
            Scale::Log => self.min * (self.max / self.min).powf(u),
        }
    }
}

pub const CONTROLS: [ControlSpec; CONTROL_COUNT] = [
    ControlSpec::linear("harmonic_gain", 0.0, 4.0),
    ControlSpec::linear("modal_gain", 0.0, 4.0),
    ControlSpec::linear("noise_gain", 0.0, 4.0),
    ControlSpec::linear("transient_gain", 0.0, 4.0),
    ControlSpec::log("transient_decay_scale", 0.25, 4.0),
    ControlSpec::log("noise_decay_scale", 0.25, 4.0),
    ControlSpec::log("body_decay_scale", 0.25, 4.0),
    ControlSpec::linear("modal_density", 1.0, 24.0),
    ControlSpec::linear("roughness_ctl", 0.0, 1.0),
    ControlSpec::log("body_pivot", 50.0, 16_000.0),
    ControlSpec::linear("transient_brightness", -1.0, 1.0),
    ControlSpec::linear("spectral_tilt", -1.0, 1.0),
    ControlSpec::linear("low_emphasis", -1.0, 1.0),
    ControlSpec::linear("high_emphasis", -1.0, 1.0),
    ControlSpec::linear("spectral_spread_shape", -1.0, 1.0),
];

/// Renderer steering variables, always inside their boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlVector {
    values: [f64; CONTROL_COUNT],
}

macro_rules! accessors {
    ($($name:ident = $i:expr),* $(,)?) => {
        $(pub fn $name(&self) -> f64 { self.values[$i] })*
    };
}

impl ControlVector {
    /// Clamps every value into its box. NaN is rejected.
    pub fn new(values: [f64; CONTROL_COUNT]) -> Result<ControlVector> {
        let mut out = [0.0; CONTROL_COUNT];
        for (i, (&v, spec)) in values.iter().zip(&CONTROLS).enumerate() {
            if v.is_nan() {
                return Err(LacError::InvalidSpec(format!("control {} is NaN", spec.name)));
            }
            out[i] = spec.clamp(v);
        }
        Ok(ControlVector { values: out })
    }

    pub fn from_unit(unit: &[f64; CONTROL_COUNT]) -> Result<ControlVector> {
        if unit.iter().any(|u| u.is_nan()) {
            return Err(LacError::InvalidSpec("NaN in normalized controls".into()));
        }
        let mut values = [0.0; CONTROL_COUNT];
        for (i, spec) in CONTROLS.iter().enumerate() {
            values[i] = spec.from_unit(unit[i]);
        }
        Ok(ControlVector { values })
    }

    pub fn to_unit(&self) -> [f64; CONTROL_COUNT] {
        let mut unit = [0.0; CONTROL_COUNT];
        for (i, spec) in CONTROLS.iter().enumerate() {
            unit[i] = spec.to_unit(self.values[i]);
        }
        unit
    }

    pub fn values(&self) -> &[f64; CONTROL_COUNT] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        CONTROLS.iter().position(|c| c.name == name).map(|i| self.values[i])
    }

    /// Copy with one control replaced (and clamped).
    pub fn with(&self, name: &str, value: f64) -> Result<ControlVector> {
        let i = CONTROLS
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| LacError::InvalidConfig(format!("unknown control `{name}`")))?;
        let mut values = self.values;
        values[i] = value;
        ControlVector::new(values)
    }

    accessors! {
        harmonic_gain = 0,
        modal_gain = 1,
        noise_gain = 2,
        transient_gain = 3,
        transient_decay_scale = 4,
        noise_decay_scale = 5,
        body_decay_scale = 6,
        modal_density = 7,
        roughness_ctl = 8,
        body_pivot = 9,
        transient_brightness = 10,
        spectral_tilt = 11,
        low_emphasis = 12,
        high_emphasis = 13,
        spectral_spread_shape = 14,
    }
}

impl fmt::Display for ControlVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (spec, v) in CONTROLS.iter().zip(&self.values) {
            writeln!(f, "{:<24}{v:.6}", spec.name)?;
        }
        Ok(())
    }
}

/// Bark level from which a band counts as carrying a mode.
const MODAL_LEVEL: f64 = 5.0;

/// Start point of the search, a fixed function of the targets.
///
/// The harmonic and transient gains are 1 when the targets imply those
/// sources and [`GAIN_FLOOR`] otherwise. Body noise carries unpitched
/// sounds; for pitched ones its gain follows flatness and
/// harmonic-to-noise ratio. The modal bank starts at the floor. Decay scales start at 1, modal density at the
/// number of Bark bands at or above the "present" level, roughness at its
/// target and the pivot at the spectral centroid target. Shaping controls
/// start flat.
pub fn init_controls(targets: &Targets) -> ControlVector {
    let value = |f: FeatureId| targets.value(f);
    let flatness = value(FeatureId::SPECTRAL_FLATNESS).unwrap_or(0.25);
    let pitched = value(FeatureId::F0_HZ).is_some();

    let harmonic = if pitched { 1.0 } else { GAIN_FLOOR };
    let noise = if pitched {
        let hnr = value(FeatureId::HARMONIC_NOISE_RATIO_DB).unwrap_or(0.0);
        let tonal = (flatness / 0.25).clamp(0.0, 1.0).sqrt();
        (10f64.powf(-hnr / 20.0) * tonal).clamp(GAIN_FLOOR, 1.0)
    } else {
        1.0
    };
    let modal = GAIN_FLOOR;
    let impulsive = value(FeatureId::CREST_FACTOR_DB).is_some_and(|c| c >= 14.0);
    let transient = if impulsive { 1.0 } else { GAIN_FLOOR };

    let density = (1..=24)
        .filter_map(|b| FeatureId::bark(b).ok())
        .filter(|&f| value(f).is_some_and(|v| v >= MODAL_LEVEL))
        .count()
        .max(1) as f64;
    let roughness = value(FeatureId::ROUGHNESS).unwrap_or(0.0);
    let pivot = value(FeatureId::SPECTRAL_CENTROID_HZ).unwrap_or(1000.0);

    ControlVector::new([
        harmonic, modal, noise, transient, 1.0, 1.0, 1.0, density, roughness, pivot, 0.0, 0.0, 0.0, 0.0, 0.0,
    ])
    .expect("finite by construction")
}
