use std::f64::consts::PI;

use super::*;
use crate::features::SAMPLE_RATE;
use crate::textcodec::{encode, verbalize};

fn vocab() -> Vocabulary {
    Vocabulary::build_default().unwrap()
}

fn pluck(f0: f64, secs: f64) -> Waveform {
    let sr = SAMPLE_RATE as f64;
    let n = (secs * sr) as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            let env = (t / 0.004).min(1.0) * (-t / 0.25).exp();
            (1..=6)
                .map(|k| (2.0 * PI * f0 * k as f64 * t).sin() / k as f64)
                .sum::<f64>()
                * 0.3
                * env
        })
        .collect();
    Waveform::new(samples, SAMPLE_RATE)
}

fn representatives(code: &LexicalCode, vocab: &Vocabulary) -> FeatureVector {
    let mut x = FeatureVector::default();
    for f in FeatureId::all() {
        x.set(f, vocab.entry(f, code.index(f)).representative);
    }
    x
}

fn candidate(violations: usize, score: f64) -> Candidate {
    Candidate {
        controls: init_controls(
            &decode_targets(
                &LexicalCode::from_indices(&vocab(), [0; crate::vocab::FEATURE_COUNT]).unwrap(),
                &vocab(),
            )
            .unwrap(),
        ),
        features: FeatureVector::default(),
        violations,
        score,
    }
}

#[test]
fn mismatch_is_zero_at_representatives() {
    let v = vocab();
    let code = encode(&v, &pluck(220.0, 1.0)).unwrap().code;
    assert_eq!(mismatch(&representatives(&code, &v), &code, &v), 0.0);
    let targets = decode_targets(&code, &v).unwrap();
    assert_eq!(mismatch_targets(&representatives(&code, &v), &targets), 0.0);
    assert_eq!(violations(&representatives(&code, &v), &targets), 0);
}

#[test]
fn mismatch_hinge_is_width_normalized() {
    let v = vocab();
    let code = encode(&v, &pluck(220.0, 1.0)).unwrap().code;
    let mid = v.label_index(FeatureId::RMS_ENERGY, "mid-power").unwrap();
    let code = code.with(FeatureId::RMS_ENERGY, mid);
    let mut x = representatives(&code, &v);
    x.set(FeatureId::RMS_ENERGY, Some(0.35));
    assert!((mismatch(&x, &code, &v) - 0.25).abs() < 1e-12);
    x.set(FeatureId::RMS_ENERGY, Some(0.05));
    assert!((mismatch(&x, &code, &v) - 0.25).abs() < 1e-12);
}

#[test]
fn definedness_disagreement_costs_one_per_slot() {
    let v = vocab();
    let pitched = encode(&v, &pluck(220.0, 1.0)).unwrap().code;
    let mut unpitched = pitched;
    for f in crate::vocab::Family::Harmonic.features() {
        unpitched = unpitched.with(f, v.sentinel(f).unwrap());
    }
    let x = representatives(&pitched, &v);
    assert!((mismatch(&x, &unpitched, &v) - 7.0).abs() < 1e-12);
    let targets = decode_targets(&unpitched, &v).unwrap();
    assert_eq!(violations(&x, &targets), 7);
    // A pitched code against an unpitched analysis is penalized the same way.
    let y = representatives(&unpitched, &v);
    assert!((mismatch(&y, &pitched, &v) - 7.0).abs() < 1e-12);
}

#[test]
fn open_ended_bins_scale_by_representative() {
    let i = Interval::new(3.0, f64::INFINITY);
    assert_eq!(feature_miss(i, Some(4.0), Some(2.0)), 1.0 / 5.0);
    assert_eq!(feature_miss(i, Some(4.0), Some(10.0)), 0.0);
    assert_eq!(feature_miss(Interval::Undefined, None, None), 0.0);
    assert_eq!(feature_miss(i, Some(4.0), None), DEFINEDNESS_PENALTY);
}

#[test]
fn unconstrained_features_do_not_count() {
    let v = vocab();
    let code = encode(&v, &pluck(220.0, 1.0)).unwrap().code;
    let targets = decode_targets(&code, &v)
        .unwrap()
        .restrict(crate::vocab::FamilySet::only(crate::vocab::Family::Bark));
    let mut x = representatives(&code, &v);
    x.set(FeatureId::RMS_ENERGY, Some(100.0));
    x.set(FeatureId::F0_HZ, None);
    assert_eq!(mismatch_targets(&x, &targets), 0.0);
    assert_eq!(violations(&x, &targets), 0);
}

#[test]
fn selection_examples() {
    assert_eq!(select_best(&[candidate(3, 0.2), candidate(1, 5.0)]).unwrap(), 1);
    assert_eq!(select_best(&[candidate(2, 1.0), candidate(2, 0.5)]).unwrap(), 1);
    assert_eq!(select_best(&[candidate(4, 9.0)]).unwrap(), 0);
    assert_eq!(select_best(&[candidate(1, 1.0), candidate(1, 1.0)]).unwrap(), 0);
    assert!(matches!(select_best(&[]), Err(LacError::EmptyCandidates)));
}

#[test]
fn objective_terms() {
    let v = vocab();
    let code = encode(&v, &pluck(330.0, 0.6)).unwrap().code;
    let targets = decode_targets(&code, &v).unwrap();
    let seed = seed_of(&v, &code);
    let config = RefineConfig::default();
    let obj = Objective::new(targets.clone(), seed, &config).unwrap();
    let c0 = obj.initial_controls();
    let at_c0 = obj.evaluate(&c0).unwrap();
    assert_eq!(obj.regularizer(&c0), 0.0);
    assert_eq!(at_c0.score, mismatch_targets(&at_c0.features, &targets));
    assert_eq!(obj.evaluate(&c0).unwrap(), at_c0);

    let moved = c0.with("noise_gain", 2.0).unwrap();
    let with_reg = obj.evaluate(&moved).unwrap();
    let flat = Objective::new(
        targets,
        seed,
        &RefineConfig {
            reg_weight: 0.0,
            ..config
        },
    )
    .unwrap();
    let without = flat.evaluate(&moved).unwrap();
    assert_eq!(
        without.score,
        mismatch_targets(&without.features, flat.spec().targets())
    );
    assert!(with_reg.score > without.score);
}

#[test]
fn budget_zero_and_bad_weights_are_rejected() {
    let v = vocab();
    let sentence = encode(&v, &pluck(220.0, 0.5)).unwrap().sentence;
    let zero = RefineConfig::default().with_budget(0);
    assert!(matches!(decode(&sentence, &v, &zero), Err(LacError::InvalidConfig(_))));
    let negative = RefineConfig {
        reg_weight: -1.0,
        ..RefineConfig::default()
    };
    assert!(matches!(
        decode(&sentence, &v, &negative),
        Err(LacError::InvalidConfig(_))
    ));
}

#[test]
fn parse_errors_propagate() {
    let v = vocab();
    match decode("a mid-power sound", &v, &RefineConfig::default()) {
        Err(LacError::MissingLabels(names)) => assert!(names.contains(&"spectral_flux".to_string())),
        other => panic!("{other:?}"),
    }
}

#[test]
fn budget_one_is_open_loop() {
    let v = vocab();
    let enc = encode(&v, &pluck(220.0, 0.5)).unwrap();
    let out = decode(&enc.sentence, &v, &RefineConfig::default().with_budget(1)).unwrap();
    assert_eq!(out.report.evaluations, 1);
    let targets = decode_targets(&enc.code, &v).unwrap();
    let spec = RenderSpec::new(targets.clone(), init_controls(&targets), seed_of(&v, &enc.code), None).unwrap();
    assert_eq!(out.waveform, render(&spec).unwrap());
}

#[test]
fn refinement_selects_and_extends_prefixes() {
    let v = vocab();
    let enc = encode(&v, &pluck(196.0, 0.4)).unwrap();
    let targets = decode_targets(&enc.code, &v).unwrap();
    let seed = seed_of(&v, &enc.code);
    let long = refine(targets.clone(), seed, &RefineConfig::default().with_budget(40)).unwrap();
    let short = refine(targets, seed, &RefineConfig::default().with_budget(12)).unwrap();
    assert!(long.candidates.len() <= 40);
    assert_eq!(short.candidates[..], long.candidates[..short.candidates.len()]);

    for r in [&short, &long] {
        let best = r.best();
        assert!(best.violations <= r.candidates[0].violations);
        for c in &r.candidates {
            assert!((best.violations, best.score) <= (c.violations, c.score));
        }
    }
    let (s, l) = (short.best(), long.best());
    assert!((l.violations, l.score) <= (s.violations, s.score));
}

#[test]
fn decode_is_deterministic() {
    let v = vocab();
    let enc = encode(&v, &pluck(262.0, 0.3)).unwrap();
    let config = RefineConfig::default().with_budget(6);
    let a = decode(&enc.sentence, &v, &config).unwrap();
    let b = decode(&verbalize(&v, &enc.code), &v, &config).unwrap();
    assert_eq!(a.waveform, b.waveform);
    assert_eq!(a.report.trace, b.report.trace);
    assert!(a.report.to_string().contains("violations"));
}

#[test]
fn target_len_is_honoured() {
    let v = vocab();
    let enc = encode(&v, &pluck(262.0, 0.3)).unwrap();
    let config = RefineConfig {
        budget: 2,
        target_len: Some(9_000),
        ..RefineConfig::default()
    };
    assert_eq!(decode(&enc.sentence, &v, &config).unwrap().waveform.len(), 9_000);
}

#[test]
fn satisfied_search_stops_early() {
    let v = vocab();
    let code = encode(&v, &pluck(220.0, 0.5)).unwrap().code;
    let targets = decode_targets(&code, &v)
        .unwrap()
        .restrict(crate::vocab::FamilySet::EMPTY);
    let config = RefineConfig {
        budget: 30,
        stop_when_satisfied: true,
        ..RefineConfig::default()
    };
    let r = refine(targets, 7, &config).unwrap();
    assert_eq!(r.candidates.len(), 1);
    assert_eq!(r.best().violations, 0);
}
