use super::*;
use crate::features::SAMPLE_RATE;
use crate::textcodec::verbalize;

fn vocab() -> Vocabulary {
    Vocabulary::build_default().unwrap()
}

fn code(v: &Vocabulary, i: usize) -> LexicalCode {
    encode(v, &synthetic_corpus(i + 1, 3)[i].waveform).unwrap().code
}

#[test]
fn bin_accuracy_counts_slots() {
    let v = vocab();
    let a = code(&v, 0);
    assert_eq!(bin_accuracy(&a, &a), 1.0);
    let f = FeatureId::SPECTRAL_FLUX;
    let other = (a.index(f) + 1) % v.alphabet_size(f) as u16;
    assert_eq!(bin_accuracy(&a, &a.with(f, other)), 46.0 / 47.0);
    let mut far = a;
    for f in FeatureId::all() {
        far = far.with(f, (a.index(f) + 1) % v.alphabet_size(f) as u16);
    }
    assert_eq!(bin_accuracy(&a, &far), 0.0);
}

#[test]
fn corpus_is_deterministic_and_in_range() {
    let a = synthetic_corpus(12, 5);
    assert_eq!(a, synthetic_corpus(12, 5));
    assert_eq!(a[..5], synthetic_corpus(5, 5)[..]);
    assert_ne!(a, synthetic_corpus(12, 6));
    for (i, s) in a.iter().enumerate() {
        let d = s.waveform.duration_s();
        assert!((0.05 - 1e-4..=2.0 + 1e-4).contains(&d), "{} {d}", s.name);
        assert!(s.name.ends_with(SoundKind::ALL[i % 4].name()));
        assert!(s.waveform.peak() < 1.0 && s.waveform.rms() > 0.0);
        assert_eq!(s.waveform.sample_rate, SAMPLE_RATE);
    }
}

#[test]
fn pre_synthesis_ceiling() {
    let v = vocab();
    let corpus = synthetic_corpus(12, 9);
    let all = pre_synthesis_accuracy(&v, &corpus, FamilySet::ALL).unwrap();
    assert!(all
        .sounds
        .iter()
        .all(|s| s.accuracy == Some(1.0) && s.full_accuracy == 1.0));
    let temporal = pre_synthesis_accuracy(&v, &corpus, FamilySet::only(Family::Temporal)).unwrap();
    for s in &temporal.sounds {
        assert_eq!(s.accuracy, Some(1.0));
        assert!((s.full_accuracy - 7.0 / 47.0).abs() < 1e-12);
    }
    let none = pre_synthesis_accuracy(&v, &corpus, FamilySet::EMPTY).unwrap();
    assert!(none
        .sounds
        .iter()
        .all(|s| s.accuracy.is_none() && s.full_accuracy == 0.0));
}

#[test]
fn an_adjacent_label_costs_one_slot() {
    let v = vocab();
    let original = code(&v, 1);
    let f = FeatureId::SPECTRAL_CENTROID_HZ;
    let i = original.index(f);
    let adjacent = if i + 1 < v.alphabet_size(f) as u16 {
        i + 1
    } else {
        i - 1
    };
    let sentence = verbalize(&v, &original.with(f, adjacent));
    let received = Parser::new(&v).parse(&v, &sentence).unwrap();
    let targets = decode_targets(&received, &v).unwrap();
    let recovered = quantize_bins(&v, targets.values(), FamilySet::ALL);
    assert_eq!(full_accuracy(&original, &recovered), 46.0 / 47.0);
}

#[test]
fn summary_statistics() {
    let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(s.mean, 2.5);
    assert_eq!(s.median, 2.5);
    let sd = (5.0f64 / 3.0).sqrt();
    assert!((s.sem - sd / 2.0).abs() < 1e-12);
    assert!((s.ci95 - 1.96 * s.sem).abs() < 1e-12);
    assert_eq!(Summary::of(&[0.7]).ci95, 0.0);
    assert!(Summary::of(&[]).mean.is_nan());

    // Quadrupling a sample of repeats halves the interval, up to the n−1
    // correction.
    let base = [0.2, 0.9, 0.5, 0.6, 0.1];
    let small: Vec<f64> = base.iter().cycle().take(100).copied().collect();
    let large: Vec<f64> = base.iter().cycle().take(400).copied().collect();
    let ratio = Summary::of(&small).ci95 / Summary::of(&large).ci95;
    assert!((ratio - 2.0).abs() < 0.01, "{ratio}");
}

#[test]
fn rate_bounds() {
    let v = vocab();
    let one = code(&v, 2);
    let same = rate_report(&v, &[one; 6]);
    assert_eq!(same.summed_entropy, 0.0);
    assert_eq!(same.support, 1);
    assert!(same.check().is_empty());

    let codes: Vec<_> = (0..8).map(|i| code(&v, i)).collect();
    let r = rate_report(&v, &codes);
    assert!(r.log2_support <= 3.0 + 1e-12);
    assert!(r.summed_entropy <= r.b_max);
    assert!(r.features.iter().all(|f| f.entropy <= f.capacity + 1e-12));
    assert!(r.check().is_empty(), "{:?}", r.check());
    assert_eq!(r.features.len(), FEATURE_COUNT);
    assert!(r.to_string().contains("b_max_bits"));
}

#[test]
fn sweep_reads_prefixes_of_one_run() {
    let v = vocab();
    let corpus = synthetic_corpus(2, 11);
    let opts = EvalOptions {
        jobs: 1,
        ..EvalOptions::default()
    };
    let sweep = budget_sweep(&v, &corpus, &[1, 4, 10], &opts).unwrap();
    assert_eq!(sweep.rows.len(), 3);
    for run in &sweep.runs {
        assert!(run.candidates.len() <= 10);
    }
    let times: Vec<f64> = sweep.rows.iter().map(|r| r.result.throughput()).collect();
    assert!(times.windows(2).all(|w| w[1] <= w[0]), "{times:?}");
    for (row, run) in sweep.rows[0].result.sounds.iter().zip(&sweep.runs) {
        assert_eq!(row.evaluations, 1);
        assert_eq!(row.violations, Some(run.candidates[0].violations));
    }
    let direct = post_synthesis_accuracy(
        &v,
        &corpus,
        &EvalOptions {
            refine: opts.refine.with_budget(4),
            ..opts
        },
    )
    .unwrap();
    for (a, b) in direct.sounds.iter().zip(&sweep.rows[1].result.sounds) {
        assert_eq!(a.recovered, b.recovered);
        assert_eq!(a.score, b.score);
    }
    assert!(budget_sweep(&v, &corpus, &[0, 4], &opts).is_err());
}
