//! Layer synthesis, mixing and post-mix shaping.

use std::f64::consts::TAU;

use rand::RngExt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use realfft::num_complex::Complex;

use super::envelope::{envelope, Sustain};
use super::harmonic::allocate_partials;
use super::{RenderSpec, Targets};
use crate::dsp;
use crate::features::SAMPLE_RATE;
use crate::vocab::{FeatureId, BARK_BAND_COUNT, BARK_EDGES_HZ};

/// Generator streams, one per random layer.
const STREAM_PHASES: u64 = 1;
const STREAM_MODAL: u64 = 2;
const STREAM_BODY_NOISE: u64 = 3;
const STREAM_TRANSIENT: u64 = 4;

const DEFAULT_RMS: f64 = 0.1;
/// Bark level assumed for bands that were not transmitted ("present").
const DEFAULT_BARK_LEVEL: f64 = 6.5;
const MODAL_JITTER: f64 = 0.02;
const MAX_TRANSIENT_S: f64 = 0.03;
/// Largest companion amplitude relative to its partial.
const COMPANION_LEVEL: f64 = 0.9;
/// Zero padding behind the mix before shaping, so the filter's pre-ringing
/// wraps into discarded samples.
const SHAPING_PAD: usize = 4096;
const SHAPING_DB: f64 = 12.0;
const MAX_SHAPING_DB: f64 = 60.0;
/// Raised-cosine fade over the last samples; a hard stop would splatter
/// broadband energy into the final analysis frame.
const FADE_OUT_S: f64 = 0.01;
/// Transient brightness slope per octave at full scale, around 2 kHz.
const BRIGHTNESS_DB_PER_OCT: f64 = 6.0;
const BRIGHTNESS_PIVOT_HZ: f64 = 2000.0;

fn rng(seed: u32, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed as u64);
    r.set_stream(stream);
    r
}

fn band_centre(band: usize) -> f64 {
    0.5 * (BARK_EDGES_HZ[band - 1] + BARK_EDGES_HZ[band])
}

/// Target band powers recovered from the Bark levels, `exp(level) − 1`.
fn band_powers(targets: &Targets) -> [f64; BARK_BAND_COUNT] {
    let mut p = [0.0; BARK_BAND_COUNT];
    for (b, slot) in p.iter_mut().enumerate() {
        let f = FeatureId::bark(b + 1).expect("band in range");
        let level = if targets.is_constrained(f) {
            targets.value(f).unwrap_or(0.0)
        } else {
            DEFAULT_BARK_LEVEL
        };
        *slot = level.exp_m1();
    }
    p
}

/// Amplitude gain per Hz that turns white noise into the target band
/// pattern. Frequencies outside the bands take the nearest band's gain.
fn bark_eq(powers: &[f64; BARK_BAND_COUNT], hz: f64) -> f64 {
    let band = BARK_EDGES_HZ[1..BARK_BAND_COUNT]
        .iter()
        .position(|&edge| hz < edge)
        .unwrap_or(BARK_BAND_COUNT - 1);
    let width = BARK_EDGES_HZ[band + 1] - BARK_EDGES_HZ[band];
    (powers[band] / width).sqrt()
}

/// Quarter of the critical bandwidth at `hz`, the detuning of maximal
/// roughness.
fn beating_offset(hz: f64) -> f64 {
    0.25 * (25.0 + 75.0 * (1.0 + 1.4 * (hz / 1000.0).powi(2)).powf(0.69))
}

/// Adds `amp·sin(ωn + φ)` using the two-term recurrence.
fn add_sine(out: &mut [f64], hz: f64, amp: f64, phase: f64) {
    let w = TAU * hz / SAMPLE_RATE as f64;
    let c = 2.0 * w.cos();
    let (mut y1, mut y2) = ((phase - w).sin(), (phase - 2.0 * w).sin());
    for v in out.iter_mut() {
        let y = c * y1 - y2;
        *v += amp * y;
        y2 = y1;
        y1 = y;
    }
}

/// Sum of sinusoids with companions for beating, scaled to unit RMS.
fn sine_bank(len: usize, partials: &[(f64, f64)], roughness: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = vec![0.0; len];
    let limit = 0.49 * SAMPLE_RATE as f64;
    let mut energy = 0.0;
    let companion = COMPANION_LEVEL * roughness;
    for &(hz, amp) in partials {
        let phase = rng.random_range(0.0..TAU);
        let beat_phase = rng.random_range(0.0..TAU);
        add_sine(&mut out, hz, amp, phase);
        energy += amp * amp;
        let beat = hz + beating_offset(hz);
        if companion > 0.0 && beat < limit {
            add_sine(&mut out, beat, companion * amp, beat_phase);
            energy += (companion * amp).powi(2);
        }
    }
    let rms = (energy / 2.0).sqrt();
    if rms > 0.0 {
        out.iter_mut().for_each(|v| *v /= rms);
    }
    out
}

/// Mode frequencies and amplitudes: the strongest target bands first, one
/// mode per band near its centre, the last mode weighted by the fractional
/// part of the density.
fn modes(powers: &[f64; BARK_BAND_COUNT], density: f64, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let mut order: Vec<usize> = (0..BARK_BAND_COUNT).collect();
    order.sort_by(|&a, &b| powers[b].total_cmp(&powers[a]).then(a.cmp(&b)));
    let jitter: Vec<f64> = (0..BARK_BAND_COUNT)
        .map(|_| rng.random_range(-MODAL_JITTER..=MODAL_JITTER))
        .collect();
    let full = density.floor() as usize;
    let frac = density - full as f64;
    order
        .iter()
        .take((full + 1).min(BARK_BAND_COUNT))
        .enumerate()
        .filter_map(|(i, &b)| {
            let weight = if i < full { 1.0 } else { frac };
            let amp = weight * powers[b].sqrt();
            (amp > 0.0).then(|| (band_centre(b + 1) * (1.0 + jitter[b]), amp))
        })
        .collect()
}

/// White noise of `len` samples shaped in the frequency domain by
/// `gain(hz)`, scaled to unit RMS.
fn shaped_noise(len: usize, rng: &mut ChaCha8Rng, gain: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = dsp::fft_size_at_least(len.max(2));
    let df = SAMPLE_RATE as f64 / n as f64;
    let spectrum: Vec<Complex<f64>> = (0..n / 2 + 1)
        .map(|k| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(re, im) * gain(k as f64 * df)
        })
        .collect();
    let mut x = dsp::irfft(&spectrum, n);
    x.truncate(len);
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / len as f64).sqrt();
    if rms > 0.0 {
        x.iter_mut().for_each(|v| *v /= rms);
    }
    x
}

/// Broad post-mix shaping in dB at `hz`: tilt about the pivot, low and high
/// shelves an octave either side of it, and a spread term that lifts or cuts
/// energy far from the pivot.
fn shaping_db(hz: f64, pivot: f64, tilt: f64, low: f64, high: f64, spread: f64) -> f64 {
    let oct = (hz.max(10.0) / pivot).log2();
    let low_w = 1.0 / (1.0 + (2.0 * (oct + 1.0)).exp());
    let high_w = 1.0 / (1.0 + (-2.0 * (oct - 1.0)).exp());
    let spread_w = (oct / 3.0).powi(2).min(1.0);
    let db = SHAPING_DB * (tilt * oct + low * low_w + high * high_w + spread * spread_w);
    db.clamp(-MAX_SHAPING_DB, MAX_SHAPING_DB)
}

fn db_to_gain(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

pub(super) fn render(spec: &RenderSpec) -> Vec<f64> {
    let targets = spec.targets();
    let c = spec.controls();
    let len = spec.len();
    let seed = spec.seed();
    let (attack_s, decay_s) = spec.envelope_times();
    let onset = spec.onset();
    let powers = band_powers(targets);

    let sustain = |scale: f64| {
        if targets.decays() {
            Sustain::Decay(decay_s * scale)
        } else {
            Sustain::Rise
        }
    };
    let body_env = envelope(onset, sustain(c.body_decay_scale()), len);

    let mut body = vec![0.0; len];
    let mut phases = rng(seed, STREAM_PHASES);
    if let Some(f0) = targets.value(FeatureId::F0_HZ).filter(|f| *f > 0.0) {
        if c.harmonic_gain() > 0.0 {
            let partials = allocate_partials(targets, f0, SAMPLE_RATE, Some(&powers));
            let h = sine_bank(len, &partials, c.roughness_ctl(), &mut phases);
            body.iter_mut().zip(&h).for_each(|(b, v)| *b += c.harmonic_gain() * v);
        }
    }
    if c.modal_gain() > 0.0 {
        let mut modal_rng = rng(seed, STREAM_MODAL);
        let m = modes(&powers, c.modal_density(), &mut modal_rng);
        let m = sine_bank(len, &m, c.roughness_ctl(), &mut modal_rng);
        body.iter_mut().zip(&m).for_each(|(b, v)| *b += c.modal_gain() * v);
    }

    let mut mix: Vec<f64> = body.iter().zip(&body_env).map(|(b, e)| b * e).collect();

    if c.noise_gain() > 0.0 {
        let noise = shaped_noise(len, &mut rng(seed, STREAM_BODY_NOISE), |hz| bark_eq(&powers, hz));
        let env = envelope(onset, sustain(c.noise_decay_scale()), len);
        for ((m, v), e) in mix.iter_mut().zip(&noise).zip(&env) {
            *m += c.noise_gain() * v * e;
        }
    }

    if c.transient_gain() > 0.0 {
        let tau = 0.25 * (4.0 * attack_s).min(MAX_TRANSIENT_S) * c.transient_decay_scale();
        let sr = SAMPLE_RATE as f64;
        let burst_len = (((onset.ramp_s + 10.0 * tau) * sr).ceil() as usize).clamp(1, len);
        let brightness = c.transient_brightness();
        let noise = shaped_noise(burst_len, &mut rng(seed, STREAM_TRANSIENT), |hz| {
            let oct = (hz.max(10.0) / BRIGHTNESS_PIVOT_HZ).log2();
            bark_eq(&powers, hz) * db_to_gain(BRIGHTNESS_DB_PER_OCT * brightness * oct)
        });
        let env = envelope(onset, Sustain::Decay(tau), burst_len);
        for ((m, v), e) in mix.iter_mut().zip(&noise).zip(&env) {
            *m += c.transient_gain() * v * e;
        }
    }

    let (tilt, low, high, spread) = (
        c.spectral_tilt(),
        c.low_emphasis(),
        c.high_emphasis(),
        c.spectral_spread_shape(),
    );
    if tilt != 0.0 || low != 0.0 || high != 0.0 || spread != 0.0 {
        let n = dsp::fft_size_at_least(len + SHAPING_PAD);
        let df = SAMPLE_RATE as f64 / n as f64;
        let pivot = c.body_pivot();
        let mut spectrum = dsp::rfft(&mix, n);
        for (k, bin) in spectrum.iter_mut().enumerate() {
            *bin *= db_to_gain(shaping_db(k as f64 * df, pivot, tilt, low, high, spread));
        }
        mix = dsp::irfft(&spectrum, n);
        mix.truncate(len);
    }

    let fade = ((FADE_OUT_S * SAMPLE_RATE as f64) as usize).min(len / 4);
    for i in 0..fade {
        let w = 0.5 - 0.5 * (std::f64::consts::PI * (i as f64 + 0.5) / fade as f64).cos();
        mix[len - 1 - i] *= w;
    }

    let target = targets.value(FeatureId::RMS_ENERGY).unwrap_or(DEFAULT_RMS);
    let rms = (mix.iter().map(|v| v * v).sum::<f64>() / len.max(1) as f64).sqrt();
    if rms > 0.0 && rms.is_finite() {
        let k = target / rms;
        mix.iter_mut().for_each(|v| *v *= k);
    } else {
        mix.iter_mut().for_each(|v| *v = 0.0);
    }
    mix
}
