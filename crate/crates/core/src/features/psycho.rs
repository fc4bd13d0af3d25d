//! Sharpness and roughness.

use crate::dsp;
use crate::vocab::BARK_BAND_COUNT;

const MAX_PEAKS: usize = 40;
const PEAK_FLOOR: f64 = 0.05;

/// DIN 45692 weighting of critical-band rate `z` (Bark).
pub fn din_weight(z: f64) -> f64 {
    if z <= 15.8 {
        1.0
    } else {
        0.15 * (0.42 * (z - 15.8)).exp() + 0.85
    }
}

/// Sharpness in acum from band powers, with specific loudness E^0.23 and
/// each band placed at its mid critical-band rate.
pub fn sharpness_acum(band_powers: &[f64; BARK_BAND_COUNT]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (b, &e) in band_powers.iter().enumerate() {
        let loudness = e.max(0.0).powf(0.23);
        let z = b as f64 + 0.5;
        num += loudness * din_weight(z) * z;
        den += loudness;
    }
    if den <= 0.0 {
        0.0
    } else {
        0.11 * num / den
    }
}

/// Vassilakis roughness of one pair of sinusoids.
pub fn pair_roughness(f1: f64, a1: f64, f2: f64, a2: f64) -> f64 {
    let (fmin, fmax) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
    let (amin, amax) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
    if amax <= 0.0 {
        return 0.0;
    }
    let s = 0.24 / (0.0207 * fmin + 18.96);
    let df = fmax - fmin;
    let x = (amin * amax).powf(0.1);
    let y = 0.5 * (2.0 * amin / (amin + amax)).powf(3.11);
    let z = (-3.5 * s * df).exp() - (-5.75 * s * df).exp();
    x * y * z
}

/// Local maxima of a magnitude spectrum at or above 5% of its maximum,
/// strongest first, at most 40, as (Hz, amplitude normalized to the
/// strongest peak).
pub fn spectral_peaks(magnitude: &[f64], bin_hz: f64) -> Vec<(f64, f64)> {
    let max = magnitude.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 || magnitude.len() < 3 {
        return Vec::new();
    }
    let mut peaks: Vec<(f64, f64)> = (1..magnitude.len() - 1)
        .filter(|&k| {
            magnitude[k] >= PEAK_FLOOR * max && magnitude[k] > magnitude[k - 1] && magnitude[k] >= magnitude[k + 1]
        })
        .map(|k| {
            let l = |i: usize| magnitude[i].max(1e-300).ln();
            let (offset, log_peak) = dsp::parabolic_peak(l(k - 1), l(k), l(k + 1));
            ((k as f64 + offset) * bin_hz, log_peak.exp())
        })
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    peaks.truncate(MAX_PEAKS);
    let top = peaks.first().map(|p| p.1).unwrap_or(1.0);
    peaks.iter_mut().for_each(|p| p.1 /= top);
    peaks
}

/// Summed pairwise roughness over the spectral peaks.
pub fn roughness(magnitude: &[f64], bin_hz: f64) -> f64 {
    let peaks = spectral_peaks(magnitude, bin_hz);
    let mut total = 0.0;
    for i in 0..peaks.len() {
        for j in i + 1..peaks.len() {
            total += pair_roughness(peaks[i].0, peaks[i].1, peaks[j].0, peaks[j].1);
        }
    }
    total
}
