//! Amplitude envelopes and the onset calibration.
//!
//! The analysis measures attack on 5 ms frames with a 3-frame smoother, so
//! a plain linear ramp of the target attack time rarely lands in the target
//! bin. Instead a small family of onsets (an initial step followed by a
//! linear ramp) is measured with the same envelope analysis and the shape
//! whose log-attack time and attack slope best fit the target bins is kept.

use super::Targets;
use crate::features::temporal::Envelope;
use crate::features::SAMPLE_RATE;
use crate::vocab::{FeatureId, Interval};

/// Relative level gain over the sustain of a non-decaying sound.
const SUSTAIN_RISE: f64 = 0.1;

/// Onset shape: a jump to `start_level` at t = 0, then a linear ramp to full
/// level over `ramp_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Onset {
    pub start_level: f64,
    pub ramp_s: f64,
}

impl Onset {
    pub const STEP: Onset = Onset {
        start_level: 1.0,
        ramp_s: 0.0,
    };

    fn level(&self, t: f64) -> f64 {
        if t >= self.ramp_s {
            1.0
        } else {
            self.start_level + (1.0 - self.start_level) * t / self.ramp_s
        }
    }
}

/// What follows the onset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Sustain {
    /// Exponential amplitude decay with this time constant.
    Decay(f64),
    /// Slow linear rise to the last sample, so no decay is measurable.
    Rise,
}

pub(crate) fn envelope(onset: Onset, sustain: Sustain, len: usize) -> Vec<f64> {
    let sr = SAMPLE_RATE as f64;
    let end = len as f64 / sr;
    let span = (end - onset.ramp_s).max(1.0 / sr);
    (0..len)
        .map(|i| {
            let t = i as f64 / sr;
            if t < onset.ramp_s {
                return onset.level(t);
            }
            let dt = t - onset.ramp_s;
            match sustain {
                Sustain::Decay(tau) => (-dt / tau).exp(),
                Sustain::Rise => 1.0 + SUSTAIN_RISE * dt / span,
            }
        })
        .collect()
}

const START_LEVELS: [f64; 6] = [0.0, 0.25, 0.5, 0.75, 0.9, 1.0];
const RAMP_STEPS: usize = 48;
const MIN_RAMP_S: f64 = 5e-5;
/// Samples simulated past the ramp for decaying shapes; the peak sits at
/// the ramp end, so the rest of the tail does not affect attack.
const TAIL_S: f64 = 0.06;

fn misses(interval: Option<Interval>, value: Option<f64>) -> u32 {
    match interval {
        Some(i) => !i.contains(value) as u32,
        None => 0,
    }
}

/// Picks the onset for a render of `len` samples. Shapes are ranked by the
/// number of missed attack bins (log-attack counting double), then by the
/// distance of the measured log-attack to its representative, then by grid
/// order. Without attack constraints the plain step is used.
pub(crate) fn calibrate(targets: &Targets, decay_s: f64, len: usize) -> Onset {
    let lat = targets.interval(FeatureId::LOG_ATTACK_TIME);
    let slope = targets.interval(FeatureId::ATTACK_SLOPE_DB_S);
    if lat.is_none() && slope.is_none() {
        return Onset::STEP;
    }
    let rep = targets.value(FeatureId::LOG_ATTACK_TIME);
    let sr = SAMPLE_RATE as f64;
    let sustain = if targets.decays() {
        Sustain::Decay(decay_s)
    } else {
        Sustain::Rise
    };
    let max_ramp = 0.5 * len as f64 / sr;
    let mut candidates = vec![Onset::STEP];
    for &start_level in &START_LEVELS[..START_LEVELS.len() - 1] {
        for j in 0..RAMP_STEPS {
            let ramp_s = MIN_RAMP_S * (max_ramp / MIN_RAMP_S).powf(j as f64 / (RAMP_STEPS - 1) as f64);
            candidates.push(Onset { start_level, ramp_s });
        }
    }

    let mut best: Option<((u32, f64), Onset)> = None;
    for onset in candidates {
        let sim_len = match sustain {
            Sustain::Decay(_) => (((onset.ramp_s + TAIL_S) * sr) as usize).min(len),
            Sustain::Rise => len,
        };
        let env = envelope(onset, sustain, sim_len);
        let measured = Envelope::compute(&env, SAMPLE_RATE).attack(SAMPLE_RATE);
        let miss = 2 * misses(lat, measured.map(|a| a.log_attack_time)) + misses(slope, measured.map(|a| a.slope_db_s));
        let dist = match (rep, measured) {
            (Some(r), Some(a)) => (a.log_attack_time - r).abs(),
            _ => 0.0,
        };
        let key = (miss, dist);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, onset));
        }
        if miss == 0 && dist == 0.0 {
            break;
        }
    }
    best.map_or(Onset::STEP, |(_, o)| o)
}
