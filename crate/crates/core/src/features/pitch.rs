//! YIN fundamental-frequency tracking and autocorrelation HNR.

use crate::dsp;

pub const YIN_WINDOW: usize = 2048;
pub const YIN_HOP: usize = 512;
pub const YIN_THRESHOLD: f64 = 0.2;
pub const F0_MIN_HZ: f64 = 20.0;
pub const F0_MAX_HZ: f64 = 5120.0;
/// Fraction of frames that must be voiced for the sound to count as pitched.
pub const VOICED_FRACTION: f64 = 0.25;
/// Frames more than 60 dB below the loudest frame are unvoiced.
const ENERGY_GATE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoicedFrame {
    pub f0_hz: f64,
    /// Normalized autocorrelation at the detected period.
    pub correlation: f64,
}

#[derive(Debug, Clone)]
pub struct PitchTrack {
    pub frames: Vec<Option<VoicedFrame>>,
}

impl PitchTrack {
    pub fn voiced(&self) -> impl Iterator<Item = &VoicedFrame> {
        self.frames.iter().flatten()
    }

    pub fn is_pitched(&self) -> bool {
        let voiced = self.voiced().count();
        !self.frames.is_empty() && voiced as f64 >= VOICED_FRACTION * self.frames.len() as f64 && voiced > 0
    }

    /// Median of the voiced per-frame estimates.
    pub fn median_f0(&self) -> Option<f64> {
        let mut f: Vec<f64> = self.voiced().map(|v| v.f0_hz).collect();
        if f.is_empty() {
            return None;
        }
        f.sort_by(f64::total_cmp);
        let n = f.len();
        Some(if n % 2 == 1 {
            f[n / 2]
        } else {
            0.5 * (f[n / 2 - 1] + f[n / 2])
        })
    }

    /// Mean over voiced frames of 10·log10(r / (1 − r)).
    pub fn hnr_db(&self) -> Option<f64> {
        let values: Vec<f64> = self
            .voiced()
            .map(|v| {
                let r = v.correlation.clamp(1e-6, 1.0 - 1e-6);
                10.0 * (r / (1.0 - r)).log10()
            })
            .collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Runs YIN over the signal. Window and lag range shrink for signals too
/// short for the full 2048 + 2205 sample span.
pub fn track(x: &[f64], sample_rate: u32) -> PitchTrack {
    let sr = sample_rate as f64;
    let tau_min = (sr / F0_MAX_HZ).ceil() as usize;
    let tau_max_full = (sr / F0_MIN_HZ).floor() as usize;
    let window = YIN_WINDOW.min(x.len() / 2);
    let tau_max = tau_max_full.min(x.len().saturating_sub(window));
    if window < 2 * tau_min || tau_max < tau_min + 2 {
        return PitchTrack { frames: Vec::new() };
    }
    let span = window + tau_max;
    let starts: Vec<usize> = (0..)
        .map(|i| i * YIN_HOP)
        .take_while(|&s| s + span <= x.len())
        .collect();

    // Prefix sums of squares give every lagged window energy in O(1).
    let mut cumsq = Vec::with_capacity(x.len() + 1);
    cumsq.push(0.0);
    for v in x {
        cumsq.push(cumsq.last().unwrap() + v * v);
    }
    let energy = |from: usize, len: usize| cumsq[from + len] - cumsq[from];
    let max_energy = starts.iter().map(|&s| energy(s, window)).fold(0.0, f64::max);

    let n_fft = dsp::fft_size_at_least(span);
    let fwd = dsp::forward_plan(n_fft);
    let inv = dsp::inverse_plan(n_fft);
    let mut seg_buf = vec![0.0; n_fft];
    let mut win_buf = vec![0.0; n_fft];
    let mut seg_spec = fwd.make_output_vec();
    let mut win_spec = fwd.make_output_vec();
    let mut corr = inv.make_output_vec();
    let mut d = vec![0.0; tau_max + 2];
    let mut cmnd = vec![0.0; tau_max + 2];

    let frames = starts
        .iter()
        .map(|&s| {
            let e0 = energy(s, window);
            if max_energy <= 0.0 || e0 <= ENERGY_GATE * max_energy {
                return None;
            }
            seg_buf.iter_mut().for_each(|v| *v = 0.0);
            win_buf.iter_mut().for_each(|v| *v = 0.0);
            seg_buf[..span].copy_from_slice(&x[s..s + span]);
            win_buf[..window].copy_from_slice(&x[s..s + window]);
            fwd.process(&mut seg_buf, &mut seg_spec).expect("plan size");
            fwd.process(&mut win_buf, &mut win_spec).expect("plan size");
            for (a, b) in seg_spec.iter_mut().zip(&win_spec) {
                *a *= b.conj();
            }
            seg_spec[0].im = 0.0;
            seg_spec[n_fft / 2].im = 0.0;
            inv.process(&mut seg_spec, &mut corr).expect("plan size");
            let scale = 1.0 / n_fft as f64;
            // r(τ) = Σ_j x[s+j] x[s+j+τ]; d(τ) = e0 + eτ − 2 r(τ)
            let r = |tau: usize| corr[tau] * scale;
            let mut running = 0.0;
            cmnd[0] = 1.0;
            for tau in 1..=tau_max.min(d.len() - 1) {
                d[tau] = (e0 + energy(s + tau, window) - 2.0 * r(tau)).max(0.0);
                running += d[tau];
                cmnd[tau] = if running > 0.0 {
                    d[tau] * tau as f64 / running
                } else {
                    1.0
                };
            }
            let mut tau = tau_min;
            let mut found = None;
            while tau < tau_max {
                if cmnd[tau] < YIN_THRESHOLD {
                    while tau + 1 < tau_max && cmnd[tau + 1] < cmnd[tau] {
                        tau += 1;
                    }
                    found = Some(tau);
                    break;
                }
                tau += 1;
            }
            let tau = found?;
            let (offset, _) = dsp::parabolic_peak(-cmnd[tau - 1], -cmnd[tau], -cmnd[tau + 1]);
            let period = tau as f64 + offset;
            let f0 = sr / period;
            if !(F0_MIN_HZ..F0_MAX_HZ).contains(&f0) {
                return None;
            }
            let norm = |t: usize| {
                let et = energy(s + t, window);
                if et <= 0.0 {
                    0.0
                } else {
                    r(t) / (e0 * et).sqrt()
                }
            };
            let (_, peak) = dsp::parabolic_peak(norm(tau - 1), norm(tau), norm(tau + 1));
            Some(VoicedFrame {
                f0_hz: f0,
                correlation: peak.max(norm(tau)).min(1.0),
            })
        })
        .collect();
    PitchTrack { frames }
}
