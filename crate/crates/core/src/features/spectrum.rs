//! Short-time power spectra and the frame-wise spectral descriptors.

use crate::dsp;
use crate::vocab::{BARK_BAND_COUNT, BARK_EDGES_HZ};

pub const FRAME_LEN: usize = 2048;
pub const HOP: usize = 512;
pub const BINS: usize = FRAME_LEN / 2 + 1;

/// Frames quieter than this fraction of the loudest frame's power are left
/// out of the frame-averaged descriptors.
const SILENT_FRAME: f64 = 1e-8;

/// Power spectra of 2048-sample periodic-Hann frames at a 512-sample hop,
/// starting at sample 0 without centering. The last frame is zero-padded;
/// a signal shorter than one frame yields a single padded frame.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    power: Vec<f64>,
    frames: usize,
    sample_rate: u32,
}

pub fn frame_count(len: usize) -> usize {
    if len <= FRAME_LEN {
        1
    } else {
        1 + (len - FRAME_LEN).div_ceil(HOP)
    }
}

/// Half-open FFT bin range `[lo, hi)` whose centre frequencies fall inside
/// Bark band `band` (1-based).
pub fn bark_bin_range(band: usize, sample_rate: u32) -> (usize, usize) {
    let df = sample_rate as f64 / FRAME_LEN as f64;
    let first = |hz: f64| ((hz / df).ceil() as usize).min(BINS);
    (first(BARK_EDGES_HZ[band - 1]), first(BARK_EDGES_HZ[band]))
}

impl Spectrogram {
    pub fn compute(samples: &[f64], sample_rate: u32) -> Spectrogram {
        let frames = frame_count(samples.len());
        let window = dsp::hann(FRAME_LEN);
        let plan = dsp::forward_plan(FRAME_LEN);
        let mut input = vec![0.0; FRAME_LEN];
        let mut output = plan.make_output_vec();
        let mut power = Vec::with_capacity(frames * BINS);
        for t in 0..frames {
            let start = t * HOP;
            for (i, slot) in input.iter_mut().enumerate() {
                *slot = samples.get(start + i).copied().unwrap_or(0.0) * window[i];
            }
            plan.process(&mut input, &mut output).expect("plan size");
            power.extend(output.iter().map(|c| c.norm_sqr()));
        }
        Spectrogram {
            power,
            frames,
            sample_rate,
        }
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        &self.power[t * BINS..(t + 1) * BINS]
    }

    pub fn bin_hz(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate as f64 / FRAME_LEN as f64
    }

    fn frame_energies(&self) -> Vec<f64> {
        (0..self.frames).map(|t| self.frame(t).iter().sum()).collect()
    }

    /// Indices of frames loud enough to carry a spectral shape.
    fn active_frames(&self) -> Vec<usize> {
        let energies = self.frame_energies();
        let max = energies.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return Vec::new();
        }
        (0..self.frames).filter(|&t| energies[t] > SILENT_FRAME * max).collect()
    }

    fn average_over_active(&self, per_frame: impl Fn(&[f64]) -> f64) -> f64 {
        let active = self.active_frames();
        if active.is_empty() {
            return 0.0;
        }
        active.iter().map(|&t| per_frame(self.frame(t))).sum::<f64>() / active.len() as f64
    }

    pub fn mean_power(&self) -> Vec<f64> {
        let mut mean = vec![0.0; BINS];
        for t in 0..self.frames {
            for (m, p) in mean.iter_mut().zip(self.frame(t)) {
                *m += p;
            }
        }
        mean.iter_mut().for_each(|m| *m /= self.frames as f64);
        mean
    }

    pub fn mean_magnitude(&self) -> Vec<f64> {
        let mut mean = vec![0.0; BINS];
        for t in 0..self.frames {
            for (m, p) in mean.iter_mut().zip(self.frame(t)) {
                *m += p.sqrt();
            }
        }
        mean.iter_mut().for_each(|m| *m /= self.frames as f64);
        mean
    }

    /// Mean-over-frames power summed inside each Bark band.
    pub fn bark_band_powers(&self) -> [f64; BARK_BAND_COUNT] {
        let mean = self.mean_power();
        let mut out = [0.0; BARK_BAND_COUNT];
        for (b, slot) in out.iter_mut().enumerate() {
            let (lo, hi) = bark_bin_range(b + 1, self.sample_rate);
            *slot = mean[lo..hi].iter().sum();
        }
        out
    }

    pub fn centroid_hz(&self) -> f64 {
        self.average_over_active(|p| {
            let (mut num, mut den) = (0.0, 0.0);
            for (k, &pk) in p.iter().enumerate() {
                let m = pk.sqrt();
                num += self.bin_hz(k) * m;
                den += m;
            }
            num / den
        })
    }

    /// Wiener entropy of the power spectrum, with a floor at 1e-10 of the
    /// frame's largest bin so exact zeros stay finite and the ratio stays
    /// scale-invariant.
    pub fn flatness(&self) -> f64 {
        self.average_over_active(|p| {
            let floor = 1e-10 * p.iter().cloned().fold(0.0, f64::max);
            let (mut log_sum, mut sum) = (0.0, 0.0);
            for &pk in p {
                let v = pk.max(floor);
                log_sum += v.ln();
                sum += v;
            }
            let n = p.len() as f64;
            ((log_sum / n).exp() / (sum / n)).clamp(0.0, 1.0)
        })
    }

    pub fn rolloff_hz(&self, fraction: f64) -> f64 {
        self.average_over_active(|p| {
            let total: f64 = p.iter().sum();
            let mut acc = 0.0;
            for (k, &pk) in p.iter().enumerate() {
                acc += pk;
                if acc >= fraction * total {
                    return self.bin_hz(k);
                }
            }
            self.bin_hz(p.len() - 1)
        })
    }

    /// Mean over successive frame pairs of the summed squared positive
    /// change between unit-peak magnitude spectra.
    pub fn flux(&self) -> f64 {
        if self.frames < 2 {
            return 0.0;
        }
        let normalized = |t: usize| -> Vec<f64> {
            let mags: Vec<f64> = self.frame(t).iter().map(|p| p.sqrt()).collect();
            let peak = mags.iter().cloned().fold(0.0, f64::max);
            if peak > 0.0 {
                mags.iter().map(|m| m / peak).collect()
            } else {
                mags
            }
        };
        let mut prev = normalized(0);
        let mut total = 0.0;
        for t in 1..self.frames {
            let cur = normalized(t);
            total += cur
                .iter()
                .zip(&prev)
                .map(|(c, p)| (c - p).max(0.0).powi(2))
                .sum::<f64>();
            prev = cur;
        }
        total / (self.frames - 1) as f64
    }
}

/// Fourth standardized moment of a magnitude spectrum read as a
/// distribution over frequency. Zero for an empty or single-point spectrum.
pub fn kurtosis(magnitude: &[f64], bin_hz: f64) -> f64 {
    let total: f64 = magnitude.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let f = |k: usize| k as f64 * bin_hz;
    let mean = magnitude.iter().enumerate().map(|(k, m)| f(k) * m).sum::<f64>() / total;
    let (mut m2, mut m4) = (0.0, 0.0);
    for (k, m) in magnitude.iter().enumerate() {
        let d = f(k) - mean;
        m2 += d * d * m;
        m4 += d.powi(4) * m;
    }
    m2 /= total;
    m4 /= total;
    if m2 <= 0.0 {
        0.0
    } else {
        m4 / (m2 * m2)
    }
}

/// Shannon entropy of a power spectrum, normalized by the log of its length.
pub fn entropy(power: &[f64]) -> f64 {
    let total: f64 = power.iter().sum();
    if total <= 0.0 || power.len() < 2 {
        return 0.0;
    }
    let h: f64 = power
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / total;
            -q * q.ln()
        })
        .sum();
    h / (power.len() as f64).ln()
}

/// Jensen irregularity: squared differences of adjacent bins over the total
/// squared magnitude.
pub fn irregularity(magnitude: &[f64]) -> f64 {
    let total: f64 = magnitude.iter().map(|m| m * m).sum();
    if total <= 0.0 {
        return 0.0;
    }
    magnitude.windows(2).map(|w| (w[0] - w[1]).powi(2)).sum::<f64>() / total
}
