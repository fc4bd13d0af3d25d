//! Waveform-level and envelope descriptors.

/// Envelope frame length in seconds.
pub const ENVELOPE_FRAME_S: f64 = 0.005;

/// Post-peak frames quieter than this fraction of the peak end the decay fit.
const DECAY_FLOOR: f64 = 1e-3;
const MIN_DECAY_FRAMES: usize = 4;

pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Peak-to-RMS ratio in dB; 0 dB for silence.
pub fn crest_factor_db(x: &[f64]) -> f64 {
    let r = rms(x);
    if r <= 0.0 {
        return 0.0;
    }
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    20.0 * (peak / r).log10()
}

/// Sign changes per second, counting zero as positive.
pub fn zero_crossing_rate(x: &[f64], sample_rate: u32) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let changes = x.windows(2).filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0)).count();
    changes as f64 * sample_rate as f64 / x.len() as f64
}

/// Frame RMS envelope of non-overlapping 5 ms frames (the last frame may be
/// shorter) and its 3-frame centered moving average.
#[derive(Debug, Clone)]
pub struct Envelope {
    pub frame_len: usize,
    pub raw: Vec<f64>,
    pub smooth: Vec<f64>,
    centers: Vec<f64>,
    duration_s: f64,
}

impl Envelope {
    pub fn frame_len_for(sample_rate: u32) -> usize {
        ((ENVELOPE_FRAME_S * sample_rate as f64).round() as usize).max(1)
    }

    pub fn compute(x: &[f64], sample_rate: u32) -> Envelope {
        let frame_len = Envelope::frame_len_for(sample_rate);
        let sr = sample_rate as f64;
        let mut raw = Vec::new();
        let mut centers = Vec::new();
        for (i, chunk) in x.chunks(frame_len).enumerate() {
            raw.push(rms(chunk));
            centers.push((i * frame_len) as f64 / sr + chunk.len() as f64 / (2.0 * sr));
        }
        let smooth = (0..raw.len())
            .map(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i + 2).min(raw.len());
                raw[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
            })
            .collect();
        Envelope {
            frame_len,
            raw,
            smooth,
            centers,
            duration_s: x.len() as f64 / sr,
        }
    }

    pub fn center_s(&self, frame: usize) -> f64 {
        self.centers[frame]
    }

    /// Index of the first maximum of the smoothed envelope.
    pub fn peak_frame(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.smooth.iter().enumerate() {
            if v > self.smooth[best] {
                best = i;
            }
        }
        best
    }

    /// Time at which the smoothed envelope first reaches `level`, linearly
    /// interpolated between frame centres, searching up to the peak.
    fn crossing_s(&self, level: f64, peak: usize) -> f64 {
        let e = &self.smooth;
        for i in 0..=peak {
            if e[i] >= level {
                if i == 0 {
                    return self.centers[0];
                }
                let frac = (level - e[i - 1]) / (e[i] - e[i - 1]);
                return self.centers[i - 1] + frac * (self.centers[i] - self.centers[i - 1]);
            }
        }
        self.centers[peak]
    }

    /// Attack measurements, or `None` when no rise is observable (silence or
    /// a peak in the first frame).
    pub fn attack(&self, sample_rate: u32) -> Option<Attack> {
        let peak = self.peak_frame();
        let top = self.smooth[peak];
        if peak == 0 || top <= 0.0 {
            return None;
        }
        let min_dt = 1.0 / sample_rate as f64;
        let t10 = self.crossing_s(0.1 * top, peak);
        let t20 = self.crossing_s(0.2 * top, peak);
        let t90 = self.crossing_s(0.9 * top, peak);
        let rise = (t90 - t20).max(min_dt);
        Some(Attack {
            log_attack_time: rise.log10(),
            slope_db_s: 20.0 * 9f64.log10() / (t90 - t10).max(min_dt),
        })
    }

    /// Exponential decay time constant from a least-squares fit of the log
    /// envelope after the peak; `None` when the fit is not decaying.
    pub fn decay_time_s(&self) -> Option<f64> {
        let peak = self.peak_frame();
        let top = self.smooth[peak];
        if top <= 0.0 {
            return None;
        }
        let points: Vec<(f64, f64)> = (peak..self.smooth.len())
            .take_while(|&i| self.smooth[i] >= DECAY_FLOOR * top)
            .map(|i| (self.centers[i], self.smooth[i].ln()))
            .collect();
        if points.len() < MIN_DECAY_FRAMES {
            return None;
        }
        let n = points.len() as f64;
        let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
        let ml = points.iter().map(|p| p.1).sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for &(t, l) in &points {
            sxy += (t - mt) * (l - ml);
            sxx += (t - mt) * (t - mt);
        }
        let slope = sxy / sxx;
        if slope.is_finite() && slope < 0.0 {
            Some(-1.0 / slope)
        } else {
            None
        }
    }

    /// Energy-weighted mean frame centre over the duration, in [0, 1).
    pub fn temporal_centroid(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (c, r) in self.centers.iter().zip(&self.raw) {
            let e = r * r;
            num += c * e;
            den += e;
        }
        if den <= 0.0 {
            return 0.0;
        }
        (num / den / self.duration_s).clamp(0.0, 1.0 - f64::EPSILON)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attack {
    pub log_attack_time: f64,
    pub slope_db_s: f64,
}
