//! Mono waveforms, WAV input/output and sample-rate conversion.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{LacError, Result};

/// Reference analysis rate. Every input is converted to this rate before
/// extraction.
pub const SAMPLE_RATE: u32 = 44_100;

/// Longest waveform the analysis accepts, in seconds.
pub const MAX_DURATION_S: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Waveform {
        Waveform { samples, sample_rate }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn rms(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        (self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Copy at the reference rate; returns `self` unchanged when already
    /// there.
    pub fn canonical(&self) -> Waveform {
        if self.sample_rate == SAMPLE_RATE {
            self.clone()
        } else {
            Waveform::new(resample(&self.samples, self.sample_rate, SAMPLE_RATE), SAMPLE_RATE)
        }
    }

    /// Checks the analysis preconditions: non-empty, finite, positive rate,
    /// at most five seconds long.
    pub fn check(&self) -> Result<()> {
        if self.sample_rate == 0 {
            return Err(LacError::InvalidWaveform("sample rate is zero".into()));
        }
        if self.samples.is_empty() {
            return Err(LacError::InvalidWaveform("no samples".into()));
        }
        if self.samples.iter().any(|x| !x.is_finite()) {
            return Err(LacError::InvalidWaveform("non-finite sample".into()));
        }
        // One sample of slack for rounding at foreign sample rates.
        if self.samples.len() as f64 > MAX_DURATION_S * self.sample_rate as f64 + 1.0 {
            return Err(LacError::InvalidWaveform(format!(
                "duration {:.3} s exceeds {MAX_DURATION_S} s",
                self.duration_s()
            )));
        }
        Ok(())
    }
}

/// A WAV file mixed down to mono.
#[derive(Debug, Clone)]
pub struct WavInput {
    pub waveform: Waveform,
    pub channels: u16,
}

pub fn read_wav(path: &Path) -> Result<WavInput> {
    let wav_err = |source| LacError::Wav {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = hound::WavReader::open(path).map_err(wav_err)?;
    let spec = reader.spec();
    let interleaved: Vec<f64> = match spec.sample_format {
        hound::SampleFormat::Float => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(wav_err)?,
        hound::SampleFormat::Int => {
            let scale = 2f64.powi(i32::from(spec.bits_per_sample) - 1);
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| f64::from(v) / scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(wav_err)?
        }
    };
    let channels = spec.channels.max(1);
    let samples = interleaved
        .chunks(channels as usize)
        .map(|frame| frame.iter().sum::<f64>() / frame.len() as f64)
        .collect();
    Ok(WavInput {
        waveform: Waveform::new(samples, spec.sample_rate),
        channels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleFormat {
    Pcm16,
    #[default]
    Float32,
}

/// Writes a mono WAV. PCM-16 output is clipped to [-1, 1] and rounded
/// without dither so files stay reproducible.
pub fn write_wav(path: &Path, waveform: &Waveform, format: SampleFormat) -> Result<()> {
    let wav_err = |source| LacError::Wav {
        path: path.to_path_buf(),
        source,
    };
    let (bits, sample_format) = match format {
        SampleFormat::Pcm16 => (16, hound::SampleFormat::Int),
        SampleFormat::Float32 => (32, hound::SampleFormat::Float),
    };
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: waveform.sample_rate,
        bits_per_sample: bits,
        sample_format,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(wav_err)?;
    for &x in &waveform.samples {
        match format {
            SampleFormat::Pcm16 => {
                let v = (x.clamp(-1.0, 1.0) * 32767.0).round() as i16;
                writer.write_sample(v).map_err(wav_err)?;
            }
            SampleFormat::Float32 => writer.write_sample(x as f32).map_err(wav_err)?,
        }
    }
    writer.finalize().map_err(wav_err)
}

fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let q = x * x / 4.0;
    for k in 1..50 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Band-limited resampling with a Kaiser-windowed sinc kernel (β = 8.6,
/// 32 zero crossings per side at the lower of the two rates).
pub fn resample(samples: &[f64], from: u32, to: u32) -> Vec<f64> {
    if from == to || samples.is_empty() {
        return samples.to_vec();
    }
    const ZEROS: f64 = 32.0;
    const BETA: f64 = 8.6;
    let ratio = to as f64 / from as f64;
    let cutoff = ratio.min(1.0) * 0.97;
    let half = ZEROS / cutoff;
    let norm = bessel_i0(BETA);
    let out_len = (samples.len() as f64 * ratio).round().max(1.0) as usize;
    (0..out_len)
        .map(|n| {
            let pos = n as f64 / ratio;
            let first = (pos - half).ceil().max(0.0) as usize;
            let last = ((pos + half).floor() as usize).min(samples.len() - 1);
            let mut acc = 0.0;
            for (j, &x) in samples.iter().enumerate().take(last + 1).skip(first) {
                let d = pos - j as f64;
                let r = d / half;
                let window = bessel_i0(BETA * (1.0 - r * r).max(0.0).sqrt()) / norm;
                let arg = PI * cutoff * d;
                let sinc = if arg.abs() < 1e-12 { 1.0 } else { arg.sin() / arg };
                acc += x * cutoff * sinc * window;
            }
            acc
        })
        .collect()
}
