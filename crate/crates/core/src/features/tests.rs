use std::f64::consts::PI;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::*;
use crate::vocab::{Family, FeatureId, Vocabulary};

const SR: u32 = SAMPLE_RATE;

fn tone(partials: &[(f64, f64)], secs: f64) -> Waveform {
    let n = (secs * SR as f64) as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / SR as f64;
            partials.iter().map(|&(f, a)| a * (2.0 * PI * f * t).sin()).sum()
        })
        .collect();
    Waveform::new(samples, SR)
}

fn noise(seed: u64, rms: f64, secs: f64) -> Waveform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (secs * SR as f64) as usize;
    Waveform::new(
        (0..n)
            .map(|_| {
                let v: f64 = StandardNormal.sample(&mut rng);
                v * rms
            })
            .collect(),
        SR,
    )
}

#[test]
fn sine_matches_closed_form() {
    let f = extract(&tone(&[(440.0, 0.5)], 1.0)).unwrap();
    let rms = f.get(FeatureId::RMS_ENERGY).unwrap();
    assert!((rms - 0.5 / 2f64.sqrt()).abs() < 1e-4, "{rms}");
    let crest = f.get(FeatureId::CREST_FACTOR_DB).unwrap();
    assert!((crest - 20.0 * 2f64.sqrt().log10()).abs() < 0.01, "{crest}");
    let f0 = f.get(FeatureId::F0_HZ).unwrap();
    let half_micro = 2f64.powf(1.0 / 72.0);
    assert!(f0 > 440.0 / half_micro && f0 < 440.0 * half_micro, "{f0}");
    assert!(f.get(FeatureId::INHARMONICITY).unwrap() < 1e-3);
    assert!(f.get(FeatureId::SPECTRAL_FLATNESS).unwrap() < 1e-3);
    let vocab = Vocabulary::build_default().unwrap();
    let flat = f.get(FeatureId::SPECTRAL_FLATNESS);
    assert_eq!(
        vocab.quantize_label(FeatureId::SPECTRAL_FLATNESS, flat).unwrap(),
        "pure-tone"
    );
}

#[test]
fn white_noise_is_flat_and_unpitched() {
    let vocab = Vocabulary::build_default().unwrap();
    let mut mean = 0.0;
    for seed in 0..8 {
        let f = extract(&noise(seed, 0.2, 1.0)).unwrap();
        let flat = f.get(FeatureId::SPECTRAL_FLATNESS);
        assert_eq!(
            vocab.quantize_label(FeatureId::SPECTRAL_FLATNESS, flat).unwrap(),
            "white-noise"
        );
        mean += flat.unwrap() / 8.0;
        for id in Family::Harmonic.features() {
            assert_eq!(f.get(id), None, "{id} seed {seed}");
        }
    }
    // E[ln] of an exponential variable: the flatness of white noise tends to e^-γ.
    assert!((mean - (-0.5772156649f64).exp()).abs() < 0.01, "{mean}");
}

#[test]
fn silence_is_degenerate_not_an_error() {
    let f = extract(&Waveform::new(vec![0.0; SR as usize / 2], SR)).unwrap();
    assert_eq!(f.get(FeatureId::RMS_ENERGY), Some(0.0));
    assert_eq!(f.get(FeatureId::ZERO_CROSSING_RATE), Some(0.0));
    assert_eq!(f.get(FeatureId::CREST_FACTOR_DB), Some(0.0));
    assert_eq!(f.get(FeatureId::LOG_ATTACK_TIME), None);
    assert_eq!(f.get(FeatureId::ATTACK_SLOPE_DB_S), None);
    assert_eq!(f.get(FeatureId::DECAY_TIME_S), None);
    assert_eq!(f.get(FeatureId::F0_HZ), None);
    let vocab = Vocabulary::build_default().unwrap();
    for (id, v) in f.iter() {
        vocab.quantize(id, v).unwrap();
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(extract(&Waveform::new(vec![], SR)).is_err());
    assert!(extract(&Waveform::new(vec![0.1; 5 * SR as usize + 10], SR)).is_err());
}

#[test]
fn definitional_checks() {
    // Square wave at 100 Hz: two sign changes per period.
    let n = SR as usize;
    let x: Vec<f64> = (0..n)
        .map(|i| {
            if (i as f64 * 200.0 / SR as f64).floor() as i64 % 2 == 0 {
                0.3
            } else {
                -0.3
            }
        })
        .collect();
    let zcr = temporal::zero_crossing_rate(&x, SR);
    let expected = x.windows(2).filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0)).count() as f64;
    assert_eq!(zcr, expected);
    assert!((zcr - 200.0).abs() <= 1.0);

    let y = [0.1, -0.5, 0.2, 0.0];
    let r = ((0.01 + 0.25 + 0.04) / 4.0f64).sqrt();
    assert!((temporal::crest_factor_db(&y) - 20.0 * (0.5 / r).log10()).abs() < 1e-12);

    // All energy in the last tenth puts the centroid near 0.95.
    let mut z = vec![0.0; n];
    z[n - n / 10..].iter_mut().for_each(|v| *v = 0.5);
    let env = temporal::Envelope::compute(&z, SR);
    assert!((env.temporal_centroid() - 0.95).abs() < 0.01);
}

#[test]
fn decay_and_attack_of_shaped_tones() {
    let tau = 0.25;
    let ramp = 0.05;
    let n = SR as usize * 2;
    let x: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / SR as f64;
            let env = if t < ramp { t / ramp } else { (-(t - ramp) / tau).exp() };
            0.5 * env * (2.0 * PI * 330.0 * t).sin()
        })
        .collect();
    let f = extract(&Waveform::new(x, SR)).unwrap();
    let decay = f.get(FeatureId::DECAY_TIME_S).unwrap();
    assert!((decay - tau).abs() / tau < 0.05, "{decay}");
    // A linear ramp crosses 20% and 90% of its peak 0.7·ramp apart.
    let attack = 10f64.powf(f.get(FeatureId::LOG_ATTACK_TIME).unwrap());
    assert!((attack - 0.7 * ramp).abs() < 0.006, "{attack}");
}

#[test]
fn families_partition_extract() {
    let w = tone(&[(440.0, 0.4), (880.0, 0.1)], 0.5);
    let full = extract(&w).unwrap();
    let mut union = FeatureVector::default();
    for family in Family::ALL {
        let part = extract_family(&w, family).unwrap();
        assert_eq!(part.values.len(), family.features().count());
        part.merge_into(&mut union);
    }
    assert_eq!(union, full);
    assert_eq!(extract_family(&w, Family::Temporal).unwrap().values.len(), 7);
    let noisy = extract_family(&noise(3, 0.2, 0.5), Family::Harmonic).unwrap();
    assert!(noisy.values.iter().all(|(_, v)| v.is_none()));
}

#[test]
fn gain_invariance() {
    let base = tone(&[(220.0, 0.2), (440.0, 0.1), (660.0, 0.05)], 0.6);
    let f = extract(&base).unwrap();
    for g in [0.5, 2.0] {
        let scaled = Waveform::new(base.samples.iter().map(|v| v * g).collect(), SR);
        let h = extract(&scaled).unwrap();
        let rel = |id: FeatureId| {
            let (a, b) = (f.get(id).unwrap(), h.get(id).unwrap());
            (a - b).abs() / a.abs().max(1e-12)
        };
        assert!((h.get(FeatureId::RMS_ENERGY).unwrap() / f.get(FeatureId::RMS_ENERGY).unwrap() - g).abs() < 1e-9);
        for id in [
            FeatureId::CREST_FACTOR_DB,
            FeatureId::ZERO_CROSSING_RATE,
            FeatureId::TEMPORAL_CENTROID,
            FeatureId::SPECTRAL_FLATNESS,
            FeatureId::SPECTRAL_ENTROPY,
            FeatureId::TRISTIMULUS_1,
            FeatureId::TRISTIMULUS_2,
            FeatureId::TRISTIMULUS_3,
        ] {
            assert!(rel(id) < 1e-6, "{id}: {}", rel(id));
        }
    }
}

#[test]
fn bark_bands_grow_with_in_band_energy() {
    let base = noise(11, 0.05, 0.5);
    let before = extract(&base).unwrap();
    for band in [1usize, 6, 12, 18, 24] {
        let center = 0.5 * (crate::vocab::BARK_EDGES_HZ[band - 1] + crate::vocab::BARK_EDGES_HZ[band]);
        let burst = tone(&[(center, 0.2)], 0.5);
        let mixed = Waveform::new(
            base.samples.iter().zip(&burst.samples).map(|(a, b)| a + b).collect(),
            SR,
        );
        let after = extract(&mixed).unwrap();
        let id = FeatureId::bark(band).unwrap();
        assert!(after.get(id).unwrap() > before.get(id).unwrap(), "band {band}");
    }
}

#[test]
fn harmonic_complex_ratios() {
    let f0 = 196.0;
    let amps: Vec<f64> = (1..=10)
        .map(|k| 0.3 / k as f64 * if k % 2 == 0 { 0.5 } else { 1.0 })
        .collect();
    let partials: Vec<(f64, f64)> = amps
        .iter()
        .enumerate()
        .map(|(i, &a)| (f0 * (i + 1) as f64, a))
        .collect();
    let f = extract(&tone(&partials, 1.0)).unwrap();
    let t: f64 = [
        FeatureId::TRISTIMULUS_1,
        FeatureId::TRISTIMULUS_2,
        FeatureId::TRISTIMULUS_3,
    ]
    .iter()
    .map(|&id| f.get(id).unwrap())
    .sum();
    assert!((t - 1.0).abs() < 1e-6);
    let energy = |odd: bool| -> f64 {
        amps.iter()
            .enumerate()
            .filter(|(i, _)| ((i + 1) % 2 == 1) == odd)
            .map(|(_, a)| a * a)
            .sum()
    };
    let expected = energy(true) / energy(false);
    let measured = f.get(FeatureId::ODD_EVEN_HARMONIC_RATIO).unwrap();
    assert!(
        (measured - expected).abs() / expected < 0.05,
        "{measured} vs {expected}"
    );
    let t1 = amps[0] * amps[0] / amps.iter().map(|a| a * a).sum::<f64>();
    assert!((f.get(FeatureId::TRISTIMULUS_1).unwrap() - t1).abs() < 0.01);
}

#[test]
fn f0_lands_in_its_vocabulary_bin() {
    let vocab = Vocabulary::build_default().unwrap();
    let (mut hits, mut total) = (0, 0);
    let mut f0 = 55.0;
    while f0 <= 3520.0 {
        let partials: Vec<(f64, f64)> = (1..=6)
            .map(|k| (f0 * k as f64, 0.3 / k as f64))
            .filter(|p| p.0 < 20_000.0)
            .collect();
        let f = extract(&tone(&partials, 0.4)).unwrap();
        let expected = vocab.quantize(FeatureId::F0_HZ, Some(f0)).unwrap();
        if f.get(FeatureId::F0_HZ)
            .map(|v| vocab.quantize(FeatureId::F0_HZ, Some(v)).unwrap())
            == Some(expected)
        {
            hits += 1;
        }
        total += 1;
        f0 *= 2f64.powf(1.0 / 11.3);
    }
    assert!(hits as f64 >= 0.95 * total as f64, "{hits}/{total}");
}

#[test]
fn foreign_rates_are_converted() {
    let n = 48_000 / 2;
    let x: Vec<f64> = (0..n)
        .map(|i| 0.5 * (2.0 * PI * 440.0 * i as f64 / 48_000.0).sin())
        .collect();
    let f = extract(&Waveform::new(x, 48_000)).unwrap();
    assert!((f.get(FeatureId::F0_HZ).unwrap() - 440.0).abs() < 1.0);
    assert!((f.get(FeatureId::RMS_ENERGY).unwrap() - 0.3536).abs() < 2e-3);
}

#[test]
fn extraction_is_deterministic() {
    let w = noise(5, 0.1, 0.3);
    assert_eq!(extract(&w).unwrap(), extract(&w).unwrap());
}
