//! Independent transcription of the reference vocabulary tables, compared
//! against the shipped data file.
//!
//! Run with `LAC_WRITE_VOCAB=1` to regenerate `data/vocabulary.tsv` from the
//! transcription below.

use std::fmt::Write as _;

use lac_core::vocab::Vocabulary;

const INF: f64 = f64::INFINITY;
const NAN: f64 = f64::NAN;

type Bins = &'static [(f64, f64, &'static str)];

const SCALARS: &[(&str, &str, Bins)] = &[
    (
        "rms_energy",
        "temporal",
        &[
            (0.0, 0.02, "whisper"),
            (0.02, 0.1, "hushed"),
            (0.1, 0.3, "mid-power"),
            (0.3, 0.55, "forceful"),
            (0.55, INF, "thunderous"),
        ],
    ),
    (
        "crest_factor_db",
        "temporal",
        &[
            (0.0, 5.0, "sustained"),
            (5.0, 10.0, "rounded"),
            (10.0, 14.0, "punchy"),
            (14.0, 17.0, "impulsive"),
            (17.0, INF, "spiky"),
        ],
    ),
    (
        "zero_crossing_rate",
        "temporal",
        &[
            (0.0, 100.0, "infrasonic"),
            (100.0, 500.0, "low-oscillation"),
            (500.0, 2000.0, "mid-oscillation"),
            (2000.0, 10000.0, "high-oscillation"),
            (10000.0, INF, "extreme-oscillation"),
        ],
    ),
    (
        "log_attack_time",
        "temporal",
        &[
            (NAN, NAN, "onset-undetected"),
            (-INF, -2.8, "snap-onset"),
            (-2.8, -2.5, "swift-onset"),
            (-2.5, -2.0, "moderate-onset"),
            (-2.0, -1.5, "gradual-onset"),
            (-1.5, INF, "creeping-onset"),
        ],
    ),
    (
        "attack_slope_db_s",
        "temporal",
        &[
            (NAN, NAN, "slope-undefined"),
            (0.0, 3000.0, "feathered"),
            (3000.0, 8000.0, "measured"),
            (8000.0, 14000.0, "aggressive"),
            (14000.0, INF, "explosive"),
        ],
    ),
    (
        "temporal_centroid",
        "temporal",
        &[
            (0.0, 0.15, "front-loaded"),
            (0.15, 0.25, "front-weighted"),
            (0.25, 0.4, "centered"),
            (0.4, 0.55, "evenly-distributed"),
            (0.55, 1.0, "back-loaded"),
        ],
    ),
    (
        "decay_time_s",
        "temporal",
        &[
            (NAN, NAN, "non-decaying"),
            (0.0, 0.04, "clipped"),
            (0.04, 0.12, "staccato"),
            (0.12, 0.4, "short-decay"),
            (0.4, 2.0, "lingering"),
            (2.0, 10.0, "ringing"),
            (10.0, INF, "endless"),
        ],
    ),
    (
        "spectral_centroid_hz",
        "spectral",
        &[
            (0.0, 150.0, "subterranean"),
            (150.0, 500.0, "dark"),
            (500.0, 2000.0, "warm"),
            (2000.0, 5000.0, "bright"),
            (5000.0, 10000.0, "brilliant"),
            (10000.0, INF, "sizzling"),
        ],
    ),
    (
        "spectral_flatness",
        "spectral",
        &[
            (0.0, 0.001, "pure-tone"),
            (0.001, 0.01, "near-tonal"),
            (0.01, 0.1, "semi-tonal"),
            (0.1, 0.4, "noise-heavy"),
            (0.4, INF, "white-noise"),
        ],
    ),
    (
        "spectral_rolloff_hz",
        "spectral",
        &[
            (0.0, 200.0, "deep-ceiling"),
            (200.0, 1000.0, "low-ceiling"),
            (1000.0, 5000.0, "mid-ceiling"),
            (5000.0, 12000.0, "high-ceiling"),
            (12000.0, INF, "open-ceiling"),
        ],
    ),
    (
        "spectral_flux",
        "spectral",
        &[
            (0.0, 0.5, "frozen"),
            (0.5, 1.5, "drifting"),
            (1.5, 3.0, "churning"),
            (3.0, 6.0, "surging"),
            (6.0, INF, "volatile"),
        ],
    ),
    (
        "spectral_kurtosis",
        "spectral",
        &[
            (0.0, 3.0, "flat-topped"),
            (3.0, 30.0, "gentle-peak"),
            (30.0, 300.0, "concentrated"),
            (300.0, 3000.0, "towering"),
            (3000.0, INF, "needle-point"),
        ],
    ),
    (
        "spectral_entropy",
        "spectral",
        &[
            (0.0, 0.15, "crystalline"),
            (0.15, 0.35, "ordered"),
            (0.35, 0.6, "semi-diffuse"),
            (0.6, 0.85, "diffuse"),
            (0.85, INF, "chaotic"),
        ],
    ),
    (
        "spectral_irregularity",
        "spectral",
        &[
            (0.0, 0.02, "glass-smooth"),
            (0.02, 0.1, "even-contour"),
            (0.1, 0.3, "rippled"),
            (0.3, 0.55, "serrated"),
            (0.55, INF, "comb-like"),
        ],
    ),
];

const HARMONIC: &[(&str, Bins)] = &[
    (
        "harmonic_noise_ratio_db",
        &[
            (NAN, NAN, "unpitched"),
            (-INF, -3.0, "noise-engulfed"),
            (-3.0, 3.0, "murky"),
            (3.0, 8.0, "hazy"),
            (8.0, 14.0, "limpid"),
            (14.0, INF, "pristine"),
        ],
    ),
    (
        "inharmonicity",
        &[
            (NAN, NAN, "unpitched"),
            (0.0, 0.001, "locked"),
            (0.001, 0.005, "finely-tuned"),
            (0.005, 0.02, "slightly-detuned"),
            (0.02, 0.1, "stretched"),
            (0.1, INF, "warped"),
        ],
    ),
    (
        "tristimulus_1",
        &[
            (NAN, NAN, "unpitched"),
            (0.0, 0.3, "recessed-fundamental"),
            (0.3, 0.6, "balanced-fundamental"),
            (0.6, 0.85, "dominant-fundamental"),
            (0.85, INF, "solo-fundamental"),
        ],
    ),
    (
        "tristimulus_2",
        &[
            (NAN, NAN, "unpitched"),
            (0.0, 0.1, "hollow-body"),
            (0.1, 0.25, "thin-body"),
            (0.25, 0.4, "present-body"),
            (0.4, INF, "lush-body"),
        ],
    ),
    (
        "tristimulus_3",
        &[
            (NAN, NAN, "unpitched"),
            (0.0, 0.05, "bare-upper"),
            (0.05, 0.15, "sparse-overtones"),
            (0.15, 0.3, "moderate-overtones"),
            (0.3, INF, "rich-overtones"),
        ],
    ),
    (
        "odd_even_harmonic_ratio",
        &[
            (NAN, NAN, "unpitched"),
            (0.0, 0.5, "even-biased"),
            (0.5, 1.5, "balanced-parity"),
            (1.5, 5.0, "odd-leaning"),
            (5.0, 50.0, "odd-heavy"),
            (50.0, INF, "fundamentals-only"),
        ],
    ),
];

const PSYCHO: &[(&str, Bins)] = &[
    (
        "sharpness_acum",
        &[
            (0.0, 1.3, "dull"),
            (1.3, 2.0, "mellow"),
            (2.0, 3.0, "keen"),
            (3.0, 4.5, "cutting"),
            (4.5, INF, "piercing"),
        ],
    ),
    (
        "roughness",
        &[
            (0.0, 0.01, "silky"),
            (0.01, 0.15, "sleek"),
            (0.15, 0.4, "textured"),
            (0.4, 0.7, "gritty"),
            (0.7, INF, "abrasive"),
        ],
    ),
];

const BARK_LEVELS: Bins = &[
    (0.0, 0.01, "silent"),
    (0.01, 2.0, "trace"),
    (2.0, 5.0, "faint"),
    (5.0, 8.0, "present"),
    (8.0, 11.0, "strong"),
    (11.0, 15.0, "dominant"),
    (15.0, INF, "overwhelming"),
];

const BARK_KEYWORDS: [&str; 24] = [
    "rumble",
    "thump",
    "boom",
    "boxiness",
    "honk",
    "quack",
    "clang",
    "punch",
    "bite",
    "twang",
    "ring",
    "tang",
    "edge",
    "chime",
    "zing",
    "crackle",
    "sibilance",
    "fizz",
    "sheen",
    "sparkle",
    "glint",
    "air",
    "vapor",
    "ether",
];

const REGISTERS: [&str; 8] = [
    "sub", "cellar", "chest", "middle", "lumen", "aloft", "crystal", "stratos",
];
const CHROMATIC: [&str; 12] = ["do", "di", "re", "ri", "mi", "fa", "fi", "sol", "si", "la", "li", "ti"];
const MICRO: [&str; 3] = ["shadow", "heart", "crown"];

/// Explicit overrides. The last three name descriptors that are not part of
/// the 47-feature inventory.
const OVERRIDES: &[(&str, &str, f64)] = &[
    ("rms_energy", "thunderous", 0.75),
    ("crest_factor_db", "spiky", 22.0),
    ("zero_crossing_rate", "extreme-oscillation", 15000.0),
    ("log_attack_time", "snap-onset", -3.2),
    ("log_attack_time", "creeping-onset", -1.0),
    ("attack_slope_db_s", "explosive", 18000.0),
    ("decay_time_s", "endless", 12.0),
    ("spectral_centroid_hz", "sizzling", 14000.0),
    ("spectral_rolloff_hz", "open-ceiling", 16000.0),
    ("spectral_spread_hz", "ultra-wide", 7000.0),
    ("spectral_skewness", "extreme-asymmetry", 75.0),
    ("spectral_kurtosis", "needle-point", 5000.0),
    ("spectral_slope", "ascending", 0.00005),
    ("harmonic_noise_ratio_db", "pristine", 20.0),
    ("harmonic_noise_ratio_db", "noise-engulfed", -5.0),
    ("inharmonicity", "warped", 0.15),
    ("odd_even_harmonic_ratio", "fundamentals-only", 75.0),
    ("sharpness_acum", "piercing", 6.0),
    ("roughness", "abrasive", 0.85),
    ("bark_level", "overwhelming", 18.0),
];

const INERT: [&str; 3] = ["spectral_spread_hz", "spectral_skewness", "spectral_slope"];

/// The generic rule, written out case by case.
fn generic(l: f64, u: f64) -> f64 {
    if l.is_nan() {
        NAN
    } else if l.is_finite() && u.is_finite() {
        (l + u) / 2.0
    } else if u == INF {
        if l > 0.0 {
            1.5 * l
        } else if l == 0.0 {
            1.0
        } else {
            1.5 * -l + 1.0
        }
    } else if u > 0.0 {
        0.5 * u
    } else {
        u - (-u) / 2.0 - 1.0
    }
}

fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

fn representative(feature: &str, label: &str, l: f64, u: f64) -> (f64, &'static str) {
    if l.is_nan() {
        return (NAN, "sentinel");
    }
    if let Some(&(_, _, v)) = OVERRIDES.iter().find(|(f, lab, _)| *f == feature && *lab == label) {
        return (v, "override");
    }
    (generic(l, u), "generic")
}

fn transcription() -> String {
    let mut out = String::from(
        "# lac vocabulary v1\n# tab-separated; bounds are half-open [lower, upper); nan marks the sentinel\n\n",
    );
    let mut names: Vec<(String, &str)> = Vec::new();
    names.extend(SCALARS.iter().map(|(n, fam, _)| (n.to_string(), *fam)));
    names.push(("f0_hz".into(), "harmonic"));
    names.extend(HARMONIC.iter().map(|(n, _)| (n.to_string(), "harmonic")));
    names.extend((1..=24).map(|b| (format!("bark_band_{b}"), "bark")));
    names.extend(PSYCHO.iter().map(|(n, _)| (n.to_string(), "psychoacoustic")));
    for (i, (n, fam)) in names.iter().enumerate() {
        writeln!(out, "feature\t{i}\t{n}\t{fam}").unwrap();
    }
    out.push('\n');
    let mut level_reps = Vec::new();
    for &(l, u, word) in BARK_LEVELS {
        let (rep, rule) = representative("bark_level", word, l, u);
        level_reps.push((rep, rule));
        writeln!(out, "bark_level\t{word}\t{}\t{}\t{}\t{rule}", num(l), num(u), num(rep)).unwrap();
    }
    for (i, k) in BARK_KEYWORDS.iter().enumerate() {
        writeln!(out, "bark_keyword\t{}\t{k}", i + 1).unwrap();
    }
    for (i, w) in REGISTERS.iter().enumerate() {
        writeln!(out, "f0_register\t{i}\t{w}").unwrap();
    }
    for (i, w) in CHROMATIC.iter().enumerate() {
        writeln!(out, "f0_chromatic\t{i}\t{w}").unwrap();
    }
    for (i, w) in MICRO.iter().enumerate() {
        writeln!(out, "f0_micro\t{i}\t{w}").unwrap();
    }
    out.push('\n');
    for &(f, label, v) in OVERRIDES {
        let status = if INERT.contains(&f) { "inert" } else { "active" };
        writeln!(out, "override\t{f}\t{label}\t{}\t{status}", num(v)).unwrap();
    }
    let table = |out: &mut String, feature: &str, bins: Bins| {
        out.push('\n');
        for &(l, u, label) in bins {
            let (rep, rule) = representative(feature, label, l, u);
            writeln!(
                out,
                "bin\t{feature}\t{label}\t{}\t{}\t{}\t{rule}",
                num(l),
                num(u),
                num(rep)
            )
            .unwrap();
        }
    };
    for (f, _, bins) in SCALARS {
        table(&mut out, f, bins);
    }
    out.push('\n');
    writeln!(out, "bin\tf0_hz\tunpitched\tnan\tnan\tnan\tsentinel").unwrap();
    let edge = |j: u32| 20.0 * 2f64.powf(f64::from(j) / 36.0);
    for k in 0..288u32 {
        let (r, n, m) = (k / 36, (k % 36) / 3, k % 3);
        let label = format!(
            "{} {} {}",
            REGISTERS[r as usize], CHROMATIC[n as usize], MICRO[m as usize]
        );
        let (l, u) = (if k == 0 { 0.0 } else { edge(k) }, edge(k + 1));
        let (rep, rule) = if k == 0 {
            (generic(l, u), "generic")
        } else {
            ((l * u).sqrt(), "geometric")
        };
        writeln!(out, "bin\tf0_hz\t{label}\t{}\t{}\t{}\t{rule}", num(l), num(u), num(rep)).unwrap();
    }
    for (f, bins) in HARMONIC {
        table(&mut out, f, bins);
    }
    for band in 1..=24 {
        out.push('\n');
        for (&(l, u, word), &(rep, rule)) in BARK_LEVELS.iter().zip(&level_reps) {
            writeln!(
                out,
                "bin\tbark_band_{band}\t{word} {}\t{}\t{}\t{}\t{rule}",
                BARK_KEYWORDS[band - 1],
                num(l),
                num(u),
                num(rep)
            )
            .unwrap();
        }
    }
    for (f, bins) in PSYCHO {
        table(&mut out, f, bins);
    }
    out
}

#[test]
fn shipped_file_matches_transcription() {
    let expected = transcription();
    if std::env::var_os("LAC_WRITE_VOCAB").is_some() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/vocabulary.tsv");
        std::fs::write(path, &expected).unwrap();
    }
    assert_eq!(
        Vocabulary::default_text(),
        expected,
        "regenerate with LAC_WRITE_VOCAB=1"
    );
}

#[test]
fn transcription_parses_and_validates() {
    let vocab = Vocabulary::from_text(&transcription()).unwrap();
    assert_eq!(vocab.to_text(), transcription());
}

#[test]
fn bark_level_representatives() {
    let reps: Vec<f64> = BARK_LEVELS
        .iter()
        .map(|&(l, u, w)| representative("bark_level", w, l, u).0)
        .collect();
    assert_eq!(reps, [0.005, 1.005, 3.5, 6.5, 9.5, 13.0, 18.0]);
}
