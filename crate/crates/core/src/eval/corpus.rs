//! Evaluation corpora: a seeded synthetic generator and WAV directories.

use std::f64::consts::PI;
use std::path::Path;

use rand::RngExt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use realfft::num_complex::Complex;

use crate::dsp::{fft_size_at_least, irfft, rfft};
use crate::error::{LacError, Result};
use crate::features::{read_wav, Waveform, SAMPLE_RATE};

#[derive(Debug, Clone, PartialEq)]
pub struct Sound {
    pub name: String,
    pub waveform: Waveform,
}

/// The synthetic sound classes, generated in rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoundKind {
    Sine,
    HarmonicComplex,
    NoiseBurst,
    Pluck,
}

impl SoundKind {
    pub const ALL: [SoundKind; 4] = [
        SoundKind::Sine,
        SoundKind::HarmonicComplex,
        SoundKind::NoiseBurst,
        SoundKind::Pluck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SoundKind::Sine => "sine",
            SoundKind::HarmonicComplex => "complex",
            SoundKind::NoiseBurst => "noise",
            SoundKind::Pluck => "pluck",
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Linear attack, then either a held level or an exponential decay, with a
/// short release at the end so nothing stops on a click.
fn envelope(n: usize, attack_s: f64, tau_s: Option<f64>) -> Vec<f64> {
    let sr = SAMPLE_RATE as f64;
    let release = (0.01 * sr) as usize;
    (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            let rise = if attack_s > 0.0 { (t / attack_s).min(1.0) } else { 1.0 };
            let fall = tau_s.map_or(1.0, |tau| (-(t - attack_s).max(0.0) / tau).exp());
            let tail = ((n - i) as f64 / release as f64).min(1.0);
            rise * fall * tail
        })
        .collect()
}

fn partials(n: usize, components: &[(f64, f64, f64)], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sr = SAMPLE_RATE as f64;
    let mut out = vec![0.0; n];
    for &(f, a, tau) in components {
        if f >= 0.45 * sr {
            continue;
        }
        let phase = rng.random_range(0.0..2.0 * PI);
        let w = 2.0 * PI * f / sr;
        for (i, o) in out.iter_mut().enumerate() {
            let decay = if tau.is_finite() {
                (-(i as f64) / (tau * sr)).exp()
            } else {
                1.0
            };
            *o += a * decay * (w * i as f64 + phase).sin();
        }
    }
    out
}

fn band_noise(n: usize, lo_hz: f64, hi_hz: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let size = fft_size_at_least(n);
    let white: Vec<f64> = (0..size).map(|_| StandardNormal.sample(rng)).collect();
    let bin_hz = SAMPLE_RATE as f64 / size as f64;
    let spectrum: Vec<Complex<f64>> = rfft(&white, size)
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let f = k as f64 * bin_hz;
            if f >= lo_hz && f <= hi_hz {
                c
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    let mut out = irfft(&spectrum, size);
    out.truncate(n);
    let rms = (out.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    if rms > 0.0 {
        out.iter_mut().for_each(|x| *x /= rms);
    }
    out
}

fn generate(kind: SoundKind, rng: &mut ChaCha8Rng) -> Waveform {
    let sr = SAMPLE_RATE as f64;
    let secs = log_uniform(rng, 0.05, 2.0);
    let n = (secs * sr).round() as usize;
    let level = log_uniform(rng, 0.02, 0.4);
    let mut x = match kind {
        SoundKind::Sine => {
            let f = log_uniform(rng, 80.0, 3000.0);
            let body = partials(n, &[(f, 1.0, f64::INFINITY)], rng);
            let attack = log_uniform(rng, 0.002, 0.05).min(0.3 * secs);
            let tau = if rng.random_bool(0.5) {
                Some(log_uniform(rng, 0.1, 2.0))
            } else {
                None
            };
            mul(body, &envelope(n, attack, tau))
        }
        SoundKind::HarmonicComplex => {
            let f0 = log_uniform(rng, 60.0, 800.0);
            let count = rng.random_range(3..=14);
            let tilt = rng.random_range(0.5..2.0);
            let odd_boost: f64 = rng.random_range(0.3..1.5);
            let comps: Vec<_> = (1..=count)
                .map(|k| {
                    let g = if k % 2 == 1 { 1.0 } else { odd_boost };
                    (f0 * k as f64, g / (k as f64).powf(tilt), f64::INFINITY)
                })
                .collect();
            let body = partials(n, &comps, rng);
            let attack = log_uniform(rng, 0.003, 0.08).min(0.3 * secs);
            let tau = Some(log_uniform(rng, 0.2, 3.0));
            mul(body, &envelope(n, attack, tau))
        }
        SoundKind::NoiseBurst => {
            let centre = log_uniform(rng, 200.0, 8000.0);
            let octaves = rng.random_range(0.5..3.0);
            let half = 2f64.powf(octaves / 2.0);
            let body = band_noise(n, centre / half, (centre * half).min(0.49 * sr), rng);
            let attack = log_uniform(rng, 0.0005, 0.02).min(0.3 * secs);
            let tau = Some(log_uniform(rng, 0.03, 0.6));
            mul(body, &envelope(n, attack, tau))
        }
        SoundKind::Pluck => {
            let f0 = log_uniform(rng, 70.0, 1000.0);
            let beta = log_uniform(rng, 1e-6, 5e-4);
            let tau = log_uniform(rng, 0.1, 1.5);
            let comps: Vec<_> = (1..=16)
                .map(|k| {
                    let kf = k as f64;
                    (f0 * kf * (1.0 + beta * kf * kf).sqrt(), 1.0 / kf, tau / kf.sqrt())
                })
                .collect();
            let body = partials(n, &comps, rng);
            let attack = log_uniform(rng, 0.0005, 0.004).min(0.3 * secs);
            mul(body, &envelope(n, attack, None))
        }
    };
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    if rms > 0.0 {
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gain = (level / rms).min(0.99 / peak);
        x.iter_mut().for_each(|v| *v *= gain);
    }
    Waveform::new(x, SAMPLE_RATE)
}

fn mul(mut a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    a.iter_mut().zip(b).for_each(|(x, e)| *x *= e);
    a
}

/// `n` synthetic sounds cycling through the four classes, 0.05 to 2 s
/// long. The same `(n, seed)` always gives the same corpus, and a shorter
/// corpus is a prefix of a longer one.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<Sound> {
    (0..n)
        .map(|i| {
            let kind = SoundKind::ALL[i % SoundKind::ALL.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            Sound {
                name: format!("{:03}-{}", i, kind.name()),
                waveform: generate(kind, &mut rng),
            }
        })
        .collect()
}

/// Reads every `.wav` file in `dir`, sorted by name. Files that cannot be
/// read are skipped and reported in the second return value.
pub fn load_corpus(dir: &Path) -> Result<(Vec<Sound>, Vec<String>)> {
    let io_err = |source| LacError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("wav")))
        .collect();
    paths.sort();
    let mut sounds = Vec::new();
    let mut warnings = Vec::new();
    for p in paths {
        match read_wav(&p).and_then(|w| w.waveform.check().map(|_| w)) {
            Ok(w) => sounds.push(Sound {
                name: p
                    .file_stem()
                    .map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
                waveform: w.waveform,
            }),
            Err(e) => warnings.push(format!("skipping {}: {e}", p.display())),
        }
    }
    Ok((sounds, warnings))
}
