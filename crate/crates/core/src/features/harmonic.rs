//! Partial tracking against a known fundamental.

use crate::dsp;

pub const MAX_PARTIALS: usize = 24;
/// Search half-width around k·f0, relative.
pub const PARTIAL_TOLERANCE: f64 = 0.03;
/// Peaks below this fraction of the spectrum maximum are not partials.
const PARTIAL_FLOOR: f64 = 1e-3;
const ODD_EVEN_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partial {
    pub k: usize,
    pub freq_hz: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSummary {
    pub inharmonicity: f64,
    pub tristimulus: [f64; 3],
    pub odd_even_ratio: f64,
    pub partials: Vec<Partial>,
}

/// Mean magnitude spectrum with a frame long enough to resolve harmonics of
/// `f0` finely: at least sixteen periods, between 8192 and 32768 samples
/// (zero-padded for short signals).
fn analysis_spectrum(x: &[f64], sample_rate: u32, f0: f64) -> (Vec<f64>, f64) {
    let periods = (16.0 * sample_rate as f64 / f0).ceil() as usize;
    let n = periods.next_power_of_two().clamp(8192, 32768);
    let hop = n / 4;
    let window = dsp::hann(n);
    let plan = dsp::forward_plan(n);
    let mut input = vec![0.0; n];
    let mut output = plan.make_output_vec();
    let mut mean = vec![0.0; n / 2 + 1];
    let frames = if x.len() <= n {
        1
    } else {
        1 + (x.len() - n).div_ceil(hop)
    };
    for t in 0..frames {
        for (i, slot) in input.iter_mut().enumerate() {
            *slot = x.get(t * hop + i).copied().unwrap_or(0.0) * window[i];
        }
        plan.process(&mut input, &mut output).expect("plan size");
        for (m, c) in mean.iter_mut().zip(&output) {
            *m += c.norm();
        }
    }
    mean.iter_mut().for_each(|m| *m /= frames as f64);
    (mean, sample_rate as f64 / n as f64)
}

/// Finds partials 1..=24 below Nyquist and summarizes them.
pub fn analyze(x: &[f64], sample_rate: u32, f0: f64) -> HarmonicSummary {
    let (spec, df) = analysis_spectrum(x, sample_rate, f0);
    let global = spec.iter().cloned().fold(0.0, f64::max);
    let nyquist = sample_rate as f64 / 2.0;
    let mut partials = Vec::new();
    for k in 1..=MAX_PARTIALS {
        let target = k as f64 * f0;
        if target * (1.0 + PARTIAL_TOLERANCE) >= nyquist {
            break;
        }
        let half = (PARTIAL_TOLERANCE * target / df).max(1.0);
        let lo = ((target / df - half).floor().max(1.0)) as usize;
        let hi = ((target / df + half).ceil() as usize).min(spec.len() - 2);
        if lo > hi {
            continue;
        }
        let best = (lo..=hi).max_by(|&a, &b| spec[a].total_cmp(&spec[b])).unwrap();
        let is_local_max = spec[best] >= spec[best - 1] && spec[best] >= spec[best + 1];
        if !is_local_max || spec[best] <= PARTIAL_FLOOR * global || spec[best] <= 0.0 {
            continue;
        }
        // Log-parabolic interpolation of the peak.
        let l = |i: usize| spec[i].max(1e-300).ln();
        let (offset, log_peak) = dsp::parabolic_peak(l(best - 1), l(best), l(best + 1));
        partials.push(Partial {
            k,
            freq_hz: (best as f64 + offset) * df,
            amplitude: log_peak.exp(),
        });
    }
    summarize(f0, partials)
}

pub fn summarize(f0: f64, partials: Vec<Partial>) -> HarmonicSummary {
    let amp_sum: f64 = partials.iter().map(|p| p.amplitude).sum();
    let inharmonicity = if amp_sum > 0.0 {
        partials
            .iter()
            .map(|p| p.amplitude * (p.freq_hz - p.k as f64 * f0).abs() / (p.k as f64 * f0))
            .sum::<f64>()
            / amp_sum
    } else {
        0.0
    };
    let energy = |pred: &dyn Fn(usize) -> bool| -> f64 {
        partials
            .iter()
            .filter(|p| pred(p.k))
            .map(|p| p.amplitude * p.amplitude)
            .sum()
    };
    let total = energy(&|_| true);
    let tristimulus = if total > 0.0 {
        [
            energy(&|k| k == 1) / total,
            energy(&|k| (2..=4).contains(&k)) / total,
            energy(&|k| k >= 5) / total,
        ]
    } else {
        [1.0 / 3.0; 3]
    };
    let odd = energy(&|k| k % 2 == 1);
    let even = energy(&|k| k % 2 == 0);
    let odd_even_ratio = match (odd > 0.0, even > 0.0) {
        (false, false) => 1.0,
        (_, false) => ODD_EVEN_CAP,
        _ => (odd / even).min(ODD_EVEN_CAP),
    };
    HarmonicSummary {
        inharmonicity,
        tristimulus,
        odd_even_ratio,
        partials,
    }
}
