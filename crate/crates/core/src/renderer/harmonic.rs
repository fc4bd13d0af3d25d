//! Partial placement and amplitude allocation for the harmonic bank.

use super::Targets;
use crate::features::harmonic::{MAX_PARTIALS, PARTIAL_TOLERANCE};
use crate::vocab::{FeatureId, Interval, BARK_BAND_COUNT, BARK_EDGES_HZ};

/// Highest partial frequency as a fraction of the sample rate.
const NYQUIST_MARGIN: f64 = 0.45;
/// Largest inharmonicity aimed for; beyond this the outer partials leave
/// the analysis search window and stop counting.
const INHARMONICITY_CEILING: f64 = 0.025;

/// Frequency of partial `k` of a stiff string: `k·f0·√(1 + βk²)`.
pub fn partial_frequency(f0: f64, beta: f64, k: usize) -> f64 {
    let k = k as f64;
    k * f0 * (1.0 + beta * k * k).sqrt()
}

/// Moves group shares `[partial 1, partials 2–4, partials 5+]` into the
/// three tristimulus bins: each share is scaled by a common factor and
/// clamped to its bin, the factor chosen so the shares sum to one. Shares
/// already inside their bins are left alone.
fn fit_groups(targets: &Targets, shares: [f64; 3]) -> [f64; 3] {
    let ids = [
        FeatureId::TRISTIMULUS_1,
        FeatureId::TRISTIMULUS_2,
        FeatureId::TRISTIMULUS_3,
    ];
    let mut bounds = [(0.0, 1.0); 3];
    for (i, f) in ids.iter().enumerate() {
        if let Some(Interval::Bounded { lower, upper }) = targets.interval(*f) {
            let (lo, hi) = (lower.max(0.0), upper.min(1.0));
            let width = (hi - lo).max(0.0);
            let floor = if lo > 0.0 { lo + 0.02 * width } else { 0.0 };
            let ceiling = if upper <= 1.0 { hi - 0.1 * width } else { 1.0 };
            bounds[i] = (floor, ceiling.max(floor));
        }
    }
    // Empty groups borrow the representative so a bin can still be reached.
    let mut base = shares;
    for (i, f) in ids.iter().enumerate() {
        if base[i] <= 0.0 {
            base[i] = targets.value(*f).unwrap_or(0.0).max(1e-6);
        }
    }
    let at = |s: f64| -> [f64; 3] {
        let mut e = [0.0; 3];
        for i in 0..3 {
            e[i] = (s * base[i]).clamp(bounds[i].0, bounds[i].1);
        }
        e
    };
    let sum = |e: [f64; 3]| e.iter().sum::<f64>();
    if shares.iter().zip(&bounds).all(|(v, (lo, hi))| v >= lo && v <= hi) {
        return shares;
    }
    let (mut lo, mut hi) = (0.0, 1e6);
    if sum(at(lo)) > 1.0 || sum(at(hi)) < 1.0 {
        return shares;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if sum(at(mid)) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e = at(hi);
    let total = sum(e);
    e.map(|v| v / total)
}

fn group(k: usize) -> usize {
    match k {
        1 => 0,
        2..=4 => 1,
        _ => 2,
    }
}

fn band_of(hz: f64) -> Option<usize> {
    if hz < BARK_EDGES_HZ[0] {
        return Some(0);
    }
    BARK_EDGES_HZ[1..].iter().position(|&e| hz < e)
}

/// Partial energies for partials `1..=count`, summing to one.
///
/// The spectral envelope comes from the Bark targets when given (each band's
/// power split evenly over the partials inside it) and from a 1/k amplitude
/// series otherwise. Group totals are then moved into the tristimulus bins
/// and odd partials above the fundamental are reweighted toward the
/// odd/even target.
fn energies(targets: &Targets, f0: f64, count: usize, band_powers: Option<&[f64; BARK_BAND_COUNT]>) -> Vec<f64> {
    let mut raw: Vec<f64> = (1..=count).map(|k| 1.0 / (k * k) as f64).collect();
    if let Some(p) = band_powers {
        let mut per_band = [0usize; BARK_BAND_COUNT];
        for k in 1..=count {
            if let Some(b) = band_of(k as f64 * f0) {
                per_band[b] += 1;
            }
        }
        for (i, r) in raw.iter_mut().enumerate() {
            *r = match band_of((i + 1) as f64 * f0) {
                Some(b) => p[b] / per_band[b] as f64,
                None => 0.0,
            };
        }
        if raw.iter().all(|r| *r <= 0.0) {
            raw = (1..=count).map(|k| 1.0 / (k * k) as f64).collect();
        }
    }
    let total: f64 = raw.iter().sum();
    let mut shares = [0.0; 3];
    for (i, r) in raw.iter().enumerate() {
        shares[group(i + 1)] += r / total;
    }
    let groups = fit_groups(targets, shares);

    let with_odd_gain = |odd_gain: f64| -> Vec<f64> {
        let weight = |k: usize| raw[k - 1].max(1e-12) * if k % 2 == 1 && k > 1 { odd_gain } else { 1.0 };
        let mut totals = [0.0; 3];
        for k in 1..=count {
            totals[group(k)] += weight(k);
        }
        (1..=count)
            .map(|k| {
                let g = group(k);
                if totals[g] > 0.0 {
                    groups[g] * weight(k) / totals[g]
                } else {
                    0.0
                }
            })
            .collect()
    };
    let ratio = |e: &[f64]| {
        let odd: f64 = e.iter().step_by(2).sum();
        let even: f64 = e.iter().skip(1).step_by(2).sum();
        odd / even
    };
    let Some(target) = targets.value(FeatureId::ODD_EVEN_HARMONIC_RATIO) else {
        return with_odd_gain(1.0);
    };
    if count < 2
        || ratio(&with_odd_gain(1.0)) >= 0.0
            && targets
                .interval(FeatureId::ODD_EVEN_HARMONIC_RATIO)
                .is_some_and(|i| i.contains(Some(ratio(&with_odd_gain(1.0)))))
    {
        return with_odd_gain(1.0);
    }
    // The ratio grows with the odd gain; bisect in log space.
    let (mut lo, mut hi) = (-20.0f64, 20.0f64);
    if ratio(&with_odd_gain(lo.exp())) >= target {
        return with_odd_gain(lo.exp());
    }
    if ratio(&with_odd_gain(hi.exp())) <= target {
        return with_odd_gain(hi.exp());
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ratio(&with_odd_gain(mid.exp())) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    with_odd_gain(hi.exp())
}

/// Amplitude-weighted relative deviation the analysis would report for the
/// stretched series, measured against the first partial and counting only
/// partials inside the search tolerance.
fn measured_inharmonicity(beta: f64, amps: &[f64]) -> f64 {
    let f1 = partial_frequency(1.0, beta, 1);
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &a) in amps.iter().enumerate() {
        let k = i + 1;
        let dev = partial_frequency(1.0, beta, k) / (k as f64 * f1) - 1.0;
        if dev.abs() <= PARTIAL_TOLERANCE {
            num += a * dev.abs();
            den += a;
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn solve_beta(target: f64, amps: &[f64]) -> f64 {
    let target = target.min(INHARMONICITY_CEILING);
    if target <= 0.0 {
        return 0.0;
    }
    let mut best = (measured_inharmonicity(0.0, amps) - target).abs();
    let mut beta = 0.0;
    for j in 0..=120 {
        let b = 1e-8 * 1e7f64.powf(j as f64 / 120.0);
        let err = (measured_inharmonicity(b, amps) - target).abs();
        if err < best {
            best = err;
            beta = b;
        }
    }
    beta
}

/// `(frequency, amplitude)` of each partial, amplitudes normalized to unit
/// total energy. Partials above 0.45·sr are dropped.
pub fn allocate_partials(
    targets: &Targets,
    f0: f64,
    sample_rate: u32,
    band_powers: Option<&[f64; BARK_BAND_COUNT]>,
) -> Vec<(f64, f64)> {
    let limit = NYQUIST_MARGIN * sample_rate as f64;
    let count = (1..=MAX_PARTIALS).take_while(|&k| k as f64 * f0 < limit).count();
    if count == 0 {
        return Vec::new();
    }
    let e = energies(targets, f0, count, band_powers);
    let total: f64 = e.iter().sum();
    let amps: Vec<f64> = e.iter().map(|v| (v / total.max(f64::MIN_POSITIVE)).sqrt()).collect();
    let beta = solve_beta(targets.value(FeatureId::INHARMONICITY).unwrap_or(0.0), &amps);
    amps.iter()
        .enumerate()
        .map(|(i, &a)| (partial_frequency(f0, beta, i + 1), a))
        .filter(|&(f, a)| f < limit && a > 0.0)
        .collect()
}
