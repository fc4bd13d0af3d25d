//! Text form of the vocabulary.

use std::fmt::Write as _;

use super::{
    BarkLevel, FeatureId, FeatureTable, Interval, LabelEntry, OverrideRecord, OverrideStatus, RepresentativeRule,
    Vocabulary, FEATURE_COUNT,
};
use crate::error::{LacError, Result};

const HEADER: &str =
    "# lac vocabulary v1\n# tab-separated; bounds are half-open [lower, upper); nan marks the sentinel\n";

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

fn bad(line: usize, message: impl Into<String>) -> LacError {
    LacError::VocabularyFormat {
        line,
        message: message.into(),
    }
}

fn num(line: usize, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| bad(line, format!("not a number: `{field}`")))
}

fn index(line: usize, field: &str) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| bad(line, format!("not an index: `{field}`")))
}

fn interval(lower: f64, upper: f64) -> Interval {
    if lower.is_nan() && upper.is_nan() {
        Interval::Undefined
    } else {
        Interval::new(lower, upper)
    }
}

fn rule(line: usize, field: &str) -> Result<RepresentativeRule> {
    RepresentativeRule::from_name(field).ok_or_else(|| bad(line, format!("unknown rule `{field}`")))
}

fn push_word(line: usize, table: &mut Vec<String>, idx: &str, word: &str) -> Result<()> {
    if index(line, idx)? != table.len() {
        return Err(bad(line, "word tables must be listed in index order"));
    }
    table.push(word.to_string());
    Ok(())
}

pub(super) fn parse(text: &str) -> Result<Vocabulary> {
    let mut features: Vec<FeatureId> = Vec::new();
    let mut bins: Vec<Vec<LabelEntry>> = vec![Vec::new(); FEATURE_COUNT];
    let mut bark_levels = Vec::new();
    let mut bark_keywords = Vec::new();
    let (mut registers, mut chromatic, mut micro) = (Vec::new(), Vec::new(), Vec::new());
    let mut overrides = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let arity = |k: usize| {
            if fields.len() == k {
                Ok(())
            } else {
                Err(bad(
                    line,
                    format!("`{}` takes {} fields, got {}", fields[0], k - 1, fields.len() - 1),
                ))
            }
        };
        match fields[0] {
            "feature" => {
                arity(4)?;
                let id = FeatureId::from_name(fields[2])
                    .map_err(|_| bad(line, format!("unknown feature `{}`", fields[2])))?;
                if index(line, fields[1])? != id.index() || features.len() != id.index() {
                    return Err(bad(line, "features must be listed in registry order"));
                }
                if id.family().name() != fields[3] {
                    return Err(bad(line, format!("{id} belongs to family {}", id.family().name())));
                }
                features.push(id);
            }
            "bark_level" => {
                arity(6)?;
                bark_levels.push(BarkLevel {
                    word: fields[1].to_string(),
                    interval: interval(num(line, fields[2])?, num(line, fields[3])?),
                    representative: num(line, fields[4])?,
                    rule: rule(line, fields[5])?,
                });
            }
            "bark_keyword" => {
                arity(3)?;
                if index(line, fields[1])? != bark_keywords.len() + 1 {
                    return Err(bad(line, "bark keywords must be listed by band 1..24"));
                }
                bark_keywords.push(fields[2].to_string());
            }
            "f0_register" => {
                arity(3)?;
                push_word(line, &mut registers, fields[1], fields[2])?;
            }
            "f0_chromatic" => {
                arity(3)?;
                push_word(line, &mut chromatic, fields[1], fields[2])?;
            }
            "f0_micro" => {
                arity(3)?;
                push_word(line, &mut micro, fields[1], fields[2])?;
            }
            "override" => {
                arity(5)?;
                let status = match fields[4] {
                    "active" => OverrideStatus::Active,
                    "inert" => OverrideStatus::Inert,
                    other => return Err(bad(line, format!("unknown override status `{other}`"))),
                };
                overrides.push(OverrideRecord {
                    feature: fields[1].to_string(),
                    label: fields[2].to_string(),
                    value: num(line, fields[3])?,
                    status,
                });
            }
            "bin" => {
                arity(7)?;
                let id = FeatureId::from_name(fields[1])
                    .map_err(|_| bad(line, format!("unknown feature `{}`", fields[1])))?;
                let representative = num(line, fields[5])?;
                bins[id.index()].push(LabelEntry {
                    label: fields[2].to_string(),
                    interval: interval(num(line, fields[3])?, num(line, fields[4])?),
                    representative: (!representative.is_nan()).then_some(representative),
                    rule: rule(line, fields[6])?,
                });
            }
            other => return Err(bad(line, format!("unknown record `{other}`"))),
        }
    }
    if features.len() != FEATURE_COUNT {
        return Err(bad(
            0,
            format!("expected {FEATURE_COUNT} feature records, got {}", features.len()),
        ));
    }
    if bins.iter().any(|b| b.len() > u16::MAX as usize) {
        return Err(bad(0, "alphabet too large"));
    }
    Ok(Vocabulary {
        tables: bins.into_iter().map(FeatureTable::new).collect(),
        bark_levels,
        bark_keywords,
        f0_registers: registers,
        f0_chromatic: chromatic,
        f0_micro: micro,
        overrides,
    })
}

pub(super) fn render(vocab: &Vocabulary) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for f in FeatureId::all() {
        writeln!(out, "feature\t{}\t{}\t{}", f.index(), f.name(), f.family().name()).unwrap();
    }
    out.push('\n');
    for l in &vocab.bark_levels {
        let (lo, hi) = l.interval.bounds().unwrap_or((f64::NAN, f64::NAN));
        writeln!(
            out,
            "bark_level\t{}\t{}\t{}\t{}\t{}",
            l.word,
            fmt_num(lo),
            fmt_num(hi),
            fmt_num(l.representative),
            l.rule.name()
        )
        .unwrap();
    }
    for (i, k) in vocab.bark_keywords.iter().enumerate() {
        writeln!(out, "bark_keyword\t{}\t{k}", i + 1).unwrap();
    }
    for (tag, words) in [
        ("f0_register", &vocab.f0_registers),
        ("f0_chromatic", &vocab.f0_chromatic),
        ("f0_micro", &vocab.f0_micro),
    ] {
        for (i, w) in words.iter().enumerate() {
            writeln!(out, "{tag}\t{i}\t{w}").unwrap();
        }
    }
    out.push('\n');
    for o in &vocab.overrides {
        let status = match o.status {
            OverrideStatus::Active => "active",
            OverrideStatus::Inert => "inert",
        };
        writeln!(
            out,
            "override\t{}\t{}\t{}\t{status}",
            o.feature,
            o.label,
            fmt_num(o.value)
        )
        .unwrap();
    }
    for f in FeatureId::all() {
        out.push('\n');
        for e in vocab.entries(f) {
            let (lo, hi) = e.interval.bounds().unwrap_or((f64::NAN, f64::NAN));
            writeln!(
                out,
                "bin\t{}\t{}\t{}\t{}\t{}\t{}",
                f.name(),
                e.label,
                fmt_num(lo),
                fmt_num(hi),
                fmt_num(e.representative.unwrap_or(f64::NAN)),
                e.rule.name()
            )
            .unwrap();
        }
    }
    out
}
