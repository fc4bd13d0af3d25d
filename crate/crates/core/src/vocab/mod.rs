//! The shared vocabulary: per-feature label alphabets, interval tables,
//! representative values and the override registry.
//!
//! The vocabulary is data. The default tables ship as a tab-separated text
//! file (`data/vocabulary.tsv`) that is parsed and validated on load; see
//! [`Vocabulary::from_text`] for the record layout.

mod file;
mod registry;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

pub use registry::{Family, FamilySet, FeatureId, BARK_BAND_COUNT, BARK_EDGES_HZ, FEATURE_COUNT};

use crate::error::{LacError, Result};

const DEFAULT_VOCABULARY: &str = include_str!("../../data/vocabulary.tsv");

/// The label shared by every harmonic-family sentinel bin.
pub const UNPITCHED: &str = "unpitched";

/// Number of non-`f0_hz` bins the reference tables claim are resolved by the
/// generic representative rule alone.
pub const DOCUMENTED_GENERIC_RULE_BINS: usize = 245;

/// Lowest finite f0 bin edge and bins per octave of the pitch vocabulary.
pub const F0_BASE_HZ: f64 = 20.0;
pub const F0_BINS_PER_OCTAVE: usize = 36;
pub const F0_FINITE_BINS: usize = 288;

/// Index of a label inside one feature's alphabet.
pub type LabelIndex = u16;

/// Shape of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Finite,
    OpenUpper,
    OpenLower,
    Sentinel,
}

/// A half-open bin `[lower, upper)`, or the sentinel standing for an
/// undefined value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Bounded { lower: f64, upper: f64 },
    Undefined,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Interval {
        Interval::Bounded { lower, upper }
    }

    pub fn kind(&self) -> IntervalKind {
        match *self {
            Interval::Undefined => IntervalKind::Sentinel,
            Interval::Bounded { upper, .. } if upper == f64::INFINITY => IntervalKind::OpenUpper,
            Interval::Bounded { lower, .. } if lower == f64::NEG_INFINITY => IntervalKind::OpenLower,
            Interval::Bounded { .. } => IntervalKind::Finite,
        }
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Interval::Bounded { lower, upper } => Some((lower, upper)),
            Interval::Undefined => None,
        }
    }

    /// Membership under the half-open convention; the sentinel contains only
    /// the undefined value.
    pub fn contains(&self, value: Option<f64>) -> bool {
        match (*self, value) {
            (Interval::Undefined, None) => true,
            (Interval::Bounded { lower, upper }, Some(v)) => v >= lower && v < upper,
            _ => false,
        }
    }

    /// Width of a finite bin.
    pub fn width(&self) -> Option<f64> {
        match (self.kind(), self.bounds()) {
            (IntervalKind::Finite, Some((l, u))) => Some(u - l),
            _ => None,
        }
    }

    /// Distance from `value` to the bin; zero inside.
    pub fn distance(&self, value: f64) -> f64 {
        match *self {
            Interval::Bounded { lower, upper } => {
                if value < lower {
                    lower - value
                } else if value >= upper {
                    value - upper
                } else {
                    0.0
                }
            }
            Interval::Undefined => f64::INFINITY,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Undefined => f.write_str("undefined"),
            Interval::Bounded { lower, upper } => write!(f, "[{lower}, {upper})"),
        }
    }
}

/// How a label's representative value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentativeRule {
    Generic,
    Geometric,
    Override,
    Sentinel,
}

impl RepresentativeRule {
    fn name(self) -> &'static str {
        match self {
            RepresentativeRule::Generic => "generic",
            RepresentativeRule::Geometric => "geometric",
            RepresentativeRule::Override => "override",
            RepresentativeRule::Sentinel => "sentinel",
        }
    }

    fn from_name(name: &str) -> Option<RepresentativeRule> {
        [
            RepresentativeRule::Generic,
            RepresentativeRule::Geometric,
            RepresentativeRule::Override,
            RepresentativeRule::Sentinel,
        ]
        .into_iter()
        .find(|r| r.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelEntry {
    pub label: String,
    pub interval: Interval,
    pub representative: Option<f64>,
    pub rule: RepresentativeRule,
}

impl LabelEntry {
    pub fn override_applied(&self) -> bool {
        self.rule == RepresentativeRule::Override
    }

    pub fn is_sentinel(&self) -> bool {
        self.interval == Interval::Undefined
    }
}

/// One shared Bark level (`silent` … `overwhelming`).
#[derive(Debug, Clone, PartialEq)]
pub struct BarkLevel {
    pub word: String,
    pub interval: Interval,
    pub representative: f64,
    pub rule: RepresentativeRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverrideStatus {
    /// Binds to a bin of the feature inventory.
    Active,
    /// Names a feature outside the inventory; stored verbatim, binds nothing.
    Inert,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverrideRecord {
    pub feature: String,
    pub label: String,
    pub value: f64,
    pub status: OverrideStatus,
}

/// Pseudo-feature name under which the Bark level override is registered.
pub const BARK_LEVEL_TABLE: &str = "bark_level";

/// Generic representative of a bin `[lower, upper)`; `None` for the sentinel
/// `lower = upper = NaN` and for an unbounded bin.
pub fn generic_representative(lower: f64, upper: f64) -> Option<f64> {
    if lower.is_nan() && upper.is_nan() {
        return None;
    }
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => Some((lower + upper) / 2.0),
        (true, false) if upper == f64::INFINITY => Some(if lower > 0.0 {
            1.5 * lower
        } else if lower == 0.0 {
            1.0
        } else {
            1.5 * lower.abs() + 1.0
        }),
        (false, true) if lower == f64::NEG_INFINITY => Some(if upper > 0.0 {
            0.5 * upper
        } else {
            upper - upper.abs() / 2.0 - 1.0
        }),
        _ => None,
    }
}

/// Representative of an `f0_hz` bin: the geometric mean for finite positive
/// bins, the generic rule otherwise.
pub fn f0_representative(lower: f64, upper: f64) -> Option<f64> {
    if lower > 0.0 && lower.is_finite() && upper.is_finite() {
        Some((lower * upper).sqrt())
    } else {
        generic_representative(lower, upper)
    }
}

/// Bounds of the global f0 bin `k` in `0..288`.
pub fn f0_bin_bounds(k: usize) -> Result<(f64, f64)> {
    if k >= F0_FINITE_BINS {
        return Err(LacError::IndexOutOfRange(format!("f0 bin {k}")));
    }
    let edge = |j: usize| F0_BASE_HZ * 2f64.powf(j as f64 / F0_BINS_PER_OCTAVE as f64);
    let lower = if k == 0 { 0.0 } else { edge(k) };
    Ok((lower, edge(k + 1)))
}

/// Lowercases, treats every non-alphanumeric character (hyphen, underscore,
/// punctuation) as a word separator, and collapses whitespace.
pub fn normalize_label(text: &str) -> String {
    normalized_words(text).collect::<Vec<_>>().join(" ")
}

pub(crate) fn normalized_words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_ascii_lowercase())
}

#[derive(Debug, Clone)]
struct FeatureTable {
    entries: Vec<LabelEntry>,
    sentinel: Option<LabelIndex>,
    /// Bounded bins ordered by lower edge.
    order: Vec<LabelIndex>,
    by_label: HashMap<String, LabelIndex>,
}

impl FeatureTable {
    fn new(entries: Vec<LabelEntry>) -> FeatureTable {
        let sentinel = entries
            .iter()
            .position(LabelEntry::is_sentinel)
            .map(|i| i as LabelIndex);
        let mut order: Vec<LabelIndex> = (0..entries.len() as LabelIndex)
            .filter(|&i| !entries[i as usize].is_sentinel())
            .collect();
        order.sort_by(|&a, &b| {
            let la = entries[a as usize].interval.bounds().unwrap().0;
            let lb = entries[b as usize].interval.bounds().unwrap().0;
            la.total_cmp(&lb)
        });
        let by_label = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (normalize_label(&e.label), i as LabelIndex))
            .collect();
        FeatureTable {
            entries,
            sentinel,
            order,
            by_label,
        }
    }
}

/// The shared vocabulary. Immutable once built.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    tables: Vec<FeatureTable>,
    bark_levels: Vec<BarkLevel>,
    bark_keywords: Vec<String>,
    f0_registers: Vec<String>,
    f0_chromatic: Vec<String>,
    f0_micro: Vec<String>,
    overrides: Vec<OverrideRecord>,
}

impl Vocabulary {
    /// Loads and validates the vocabulary shipped with the crate.
    pub fn build_default() -> Result<Vocabulary> {
        Vocabulary::from_text(DEFAULT_VOCABULARY)
    }

    /// The shipped vocabulary text.
    pub fn default_text() -> &'static str {
        DEFAULT_VOCABULARY
    }

    /// Parses a vocabulary file and rejects it unless [`Vocabulary::validate`]
    /// comes back clean.
    ///
    /// The file is tab-separated, one record per line, `#` starts a comment:
    ///
    /// ```text
    /// feature       <index> <name> <family>
    /// bark_level    <word> <lower> <upper> <representative> <rule>
    /// bark_keyword  <band> <word>
    /// f0_register   <r> <word>      (also f0_chromatic, f0_micro)
    /// override      <feature> <label> <value> <active|inert>
    /// bin           <feature> <label> <lower> <upper> <representative> <rule>
    /// ```
    ///
    /// Bounds are spelled `-inf`, `inf` or `nan`; rules are `generic`,
    /// `geometric`, `override` or `sentinel`.
    pub fn from_text(text: &str) -> Result<Vocabulary> {
        let vocab = file::parse(text)?;
        let report = vocab.validate();
        if report.is_clean() {
            Ok(vocab)
        } else {
            Err(LacError::VocabularyInvalid(report.findings().join("; ")))
        }
    }

    /// Parses without validation, for inspecting broken files.
    pub fn from_text_unchecked(text: &str) -> Result<Vocabulary> {
        file::parse(text)
    }

    pub fn to_text(&self) -> String {
        file::render(self)
    }

    pub fn load(path: &Path) -> Result<Vocabulary> {
        let text = std::fs::read_to_string(path).map_err(|source| LacError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Vocabulary::from_text(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| LacError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    fn table(&self, feature: FeatureId) -> &FeatureTable {
        &self.tables[feature.index()]
    }

    pub fn entries(&self, feature: FeatureId) -> &[LabelEntry] {
        &self.table(feature).entries
    }

    pub fn entry(&self, feature: FeatureId, index: LabelIndex) -> &LabelEntry {
        &self.table(feature).entries[index as usize]
    }

    pub fn alphabet_size(&self, feature: FeatureId) -> usize {
        self.table(feature).entries.len()
    }

    pub fn sentinel(&self, feature: FeatureId) -> Option<LabelIndex> {
        self.table(feature).sentinel
    }

    pub fn bark_levels(&self) -> &[BarkLevel] {
        &self.bark_levels
    }

    pub fn bark_keywords(&self) -> &[String] {
        &self.bark_keywords
    }

    pub fn overrides(&self) -> &[OverrideRecord] {
        &self.overrides
    }

    /// Position of `label` in the feature's alphabet, compared after
    /// normalization.
    pub fn label_index(&self, feature: FeatureId, label: &str) -> Result<LabelIndex> {
        self.table(feature)
            .by_label
            .get(&normalize_label(label))
            .copied()
            .ok_or_else(|| LacError::UnknownLabel {
                feature: feature.name().to_string(),
                label: label.to_string(),
            })
    }

    /// Forward quantizer: the unique bin containing `value`.
    pub fn quantize(&self, feature: FeatureId, value: Option<f64>) -> Result<LabelIndex> {
        let table = self.table(feature);
        let Some(v) = value else {
            return table
                .sentinel
                .ok_or_else(|| LacError::NoSentinel(feature.name().to_string()));
        };
        let out_of_range = || LacError::OutOfRange {
            feature: feature.name().to_string(),
            value: v,
        };
        if v.is_nan() {
            return Err(out_of_range());
        }
        let lower_of = |i: &LabelIndex| table.entries[*i as usize].interval.bounds().unwrap().0;
        let pos = table.order.partition_point(|i| lower_of(i) <= v);
        let candidate = pos.checked_sub(1).map(|p| table.order[p]).ok_or_else(out_of_range)?;
        if table.entries[candidate as usize].interval.contains(Some(v)) {
            Ok(candidate)
        } else {
            Err(out_of_range())
        }
    }

    pub fn quantize_label(&self, feature: FeatureId, value: Option<f64>) -> Result<&str> {
        let idx = self.quantize(feature, value)?;
        Ok(&self.entry(feature, idx).label)
    }

    pub fn interval_of(&self, feature: FeatureId, label: &str) -> Result<Interval> {
        let idx = self.label_index(feature, label)?;
        Ok(self.entry(feature, idx).interval)
    }

    pub fn representative_of(&self, feature: FeatureId, label: &str) -> Result<Option<f64>> {
        let idx = self.label_index(feature, label)?;
        Ok(self.entry(feature, idx).representative)
    }

    /// Label and interval of the procedural pitch bin `(register, chromatic,
    /// micro)`.
    pub fn f0_bin(&self, register: usize, chromatic: usize, micro: usize) -> Result<(String, Interval)> {
        let (Some(r), Some(n), Some(m)) = (
            self.f0_registers.get(register),
            self.f0_chromatic.get(chromatic),
            self.f0_micro.get(micro),
        ) else {
            return Err(LacError::IndexOutOfRange(format!(
                "f0 bin ({register}, {chromatic}, {micro})"
            )));
        };
        let k = 36 * register + 3 * chromatic + micro;
        let (lower, upper) = f0_bin_bounds(k)?;
        Ok((format!("{r} {n} {m}"), Interval::new(lower, upper)))
    }

    /// Worst-case bits per sound: the sum of `log2 |alphabet|`, sentinels
    /// included.
    pub fn max_bits(&self) -> f64 {
        FeatureId::all().map(|f| (self.alphabet_size(f) as f64).log2()).sum()
    }

    /// Every normalized label with the slots it can fill. Only `unpitched`
    /// maps to more than one slot in a valid vocabulary.
    pub fn label_slots(&self) -> HashMap<String, Vec<(FeatureId, LabelIndex)>> {
        let mut map: HashMap<String, Vec<(FeatureId, LabelIndex)>> = HashMap::new();
        for f in FeatureId::all() {
            for (i, e) in self.entries(f).iter().enumerate() {
                map.entry(normalize_label(&e.label))
                    .or_default()
                    .push((f, i as LabelIndex));
            }
        }
        map
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_tables(&mut report);
        self.check_coverage(&mut report);
        self.check_uniqueness(&mut report);
        self.check_composites(&mut report);
        report.non_f0_bins = FeatureId::all()
            .filter(|f| *f != FeatureId::F0_HZ)
            .map(|f| self.alphabet_size(f))
            .sum();
        report.generic_rule_bins = FeatureId::all()
            .filter(|f| *f != FeatureId::F0_HZ)
            .flat_map(|f| self.entries(f))
            .filter(|e| e.rule == RepresentativeRule::Generic)
            .count();
        report.inert_overrides = self
            .overrides
            .iter()
            .filter(|o| o.status == OverrideStatus::Inert)
            .map(|o| format!("{}/{}", o.feature, o.label))
            .collect();
        report
    }

    fn active_override(&self, feature: &str, label: &str) -> Option<f64> {
        self.overrides
            .iter()
            .find(|o| o.status == OverrideStatus::Active && o.feature == feature && o.label == label)
            .map(|o| o.value)
    }

    fn check_tables(&self, report: &mut ValidationReport) {
        for o in &self.overrides {
            let known = o.feature == BARK_LEVEL_TABLE || FeatureId::from_name(&o.feature).is_ok();
            let expected = if known {
                OverrideStatus::Active
            } else {
                OverrideStatus::Inert
            };
            if o.status != expected {
                report
                    .consistency
                    .push(format!("override {}/{} should be {:?}", o.feature, o.label, expected));
            }
        }
        for level in &self.bark_levels {
            let (l, u) = level.interval.bounds().unwrap_or((f64::NAN, f64::NAN));
            let expected = match level.rule {
                RepresentativeRule::Override => self.active_override(BARK_LEVEL_TABLE, &level.word),
                _ => generic_representative(l, u),
            };
            if expected != Some(level.representative) {
                report.consistency.push(format!(
                    "bark level {} representative {} disagrees with its rule",
                    level.word, level.representative
                ));
            }
        }
        for f in FeatureId::all() {
            let entries = self.entries(f);
            if entries.is_empty() {
                report.consistency.push(format!("{f}: empty alphabet"));
            }
            if entries.iter().filter(|e| e.is_sentinel()).count() > 1 {
                report.consistency.push(format!("{f}: more than one sentinel"));
            }
            for e in entries {
                let (l, u) = e.interval.bounds().unwrap_or((f64::NAN, f64::NAN));
                // Written negated so NaN bounds also count as empty.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                let empty = !(l < u);
                if e.interval != Interval::Undefined && empty {
                    report
                        .consistency
                        .push(format!("{f}/{}: empty interval {}", e.label, e.interval));
                }
                let expected = match e.rule {
                    RepresentativeRule::Sentinel => {
                        if !e.is_sentinel() {
                            report
                                .consistency
                                .push(format!("{f}/{}: sentinel rule on a bounded bin", e.label));
                        }
                        None
                    }
                    RepresentativeRule::Generic => generic_representative(l, u),
                    RepresentativeRule::Geometric => f0_representative(l, u),
                    RepresentativeRule::Override => match f.bark_band() {
                        Some(_) => {
                            let level = e.label.split(' ').next().unwrap_or_default();
                            self.active_override(BARK_LEVEL_TABLE, level)
                        }
                        None => self.active_override(f.name(), &e.label),
                    },
                };
                if e.rule != RepresentativeRule::Sentinel && e.is_sentinel() {
                    report
                        .consistency
                        .push(format!("{f}/{}: sentinel bin without sentinel rule", e.label));
                }
                if expected != e.representative {
                    report.consistency.push(format!(
                        "{f}/{}: representative {:?} disagrees with its {} rule ({:?})",
                        e.label,
                        e.representative,
                        e.rule.name(),
                        expected
                    ));
                }
                if let (IntervalKind::Finite, Some(r)) = (e.interval.kind(), e.representative) {
                    if !(r >= l && r < u) {
                        report
                            .representative_outside
                            .push(format!("{f}/{}: {r} outside {}", e.label, e.interval));
                    }
                }
            }
            if f != FeatureId::F0_HZ && f.bark_band().is_none() {
                for e in entries {
                    if let Some(v) = self.active_override(f.name(), &e.label) {
                        if e.rule != RepresentativeRule::Override || e.representative != Some(v) {
                            report
                                .consistency
                                .push(format!("{f}/{}: override {v} not applied", e.label));
                        }
                    }
                }
            }
        }
    }

    fn check_coverage(&self, report: &mut ValidationReport) {
        for f in FeatureId::all() {
            let table = self.table(f);
            let (lo, hi) = f.domain();
            let mut cursor = lo;
            for &i in &table.order {
                let (l, u) = table.entries[i as usize].interval.bounds().unwrap();
                if l > cursor {
                    report.coverage.push(format!("{f}: gap [{cursor}, {l})"));
                } else if l < cursor {
                    report.coverage.push(format!("{f}: overlap at {l}"));
                }
                cursor = cursor.max(u);
            }
            if cursor < hi {
                report.coverage.push(format!("{f}: gap [{cursor}, {hi})"));
            }
        }
    }

    fn check_uniqueness(&self, report: &mut ValidationReport) {
        let mut dups: Vec<String> = self
            .label_slots()
            .into_iter()
            .filter(|(label, slots)| label != UNPITCHED && slots.len() > 1)
            .map(|(label, slots)| {
                let names: Vec<_> = slots.iter().map(|(f, _)| f.name()).collect();
                format!("`{label}` in {}", names.join(", "))
            })
            .collect();
        dups.sort();
        report.duplicate_labels = dups;
    }

    fn check_composites(&self, report: &mut ValidationReport) {
        if self.bark_keywords.len() != BARK_BAND_COUNT || self.bark_levels.len() != 7 {
            report
                .consistency
                .push("bark tables need 7 levels and 24 keywords".to_string());
            return;
        }
        for band in 1..=BARK_BAND_COUNT {
            let f = FeatureId::bark(band).unwrap();
            let keyword = &self.bark_keywords[band - 1];
            let expected: Vec<(String, Interval, Option<f64>)> = self
                .bark_levels
                .iter()
                .map(|l| (format!("{} {keyword}", l.word), l.interval, Some(l.representative)))
                .collect();
            let actual: Vec<(String, Interval, Option<f64>)> = self
                .entries(f)
                .iter()
                .map(|e| (e.label.clone(), e.interval, e.representative))
                .collect();
            if expected != actual {
                report
                    .consistency
                    .push(format!("{f}: bins differ from level x keyword composition"));
            }
        }
        if self.f0_registers.len() != 8 || self.f0_chromatic.len() != 12 || self.f0_micro.len() != 3 {
            report
                .consistency
                .push("f0 word tables need 8 registers, 12 chromatic and 3 micro words".to_string());
            return;
        }
        let entries = self.entries(FeatureId::F0_HZ);
        let finite: Vec<&LabelEntry> = entries.iter().filter(|e| !e.is_sentinel()).collect();
        if finite.len() != F0_FINITE_BINS {
            report
                .consistency
                .push(format!("f0_hz: {} finite bins, expected 288", finite.len()));
            return;
        }
        for (k, e) in finite.iter().enumerate() {
            let (r, n, m) = (k / 36, (k % 36) / 3, k % 3);
            let (label, interval) = self.f0_bin(r, n, m).expect("indices in range");
            if e.label != label || e.interval != interval {
                report
                    .consistency
                    .push(format!("f0_hz bin {k}: expected `{label}` {interval}"));
            }
        }
        if self
            .sentinel(FeatureId::F0_HZ)
            .map(|i| self.entry(FeatureId::F0_HZ, i).label.as_str())
            != Some(UNPITCHED)
        {
            report
                .consistency
                .push("f0_hz: missing `unpitched` sentinel".to_string());
        }
    }
}

/// Findings of [`Vocabulary::validate`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub coverage: Vec<String>,
    pub duplicate_labels: Vec<String>,
    pub representative_outside: Vec<String>,
    pub consistency: Vec<String>,
    pub non_f0_bins: usize,
    pub generic_rule_bins: usize,
    pub inert_overrides: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings().is_empty()
    }

    pub fn findings(&self) -> Vec<String> {
        self.coverage
            .iter()
            .chain(&self.duplicate_labels)
            .chain(&self.representative_outside)
            .chain(&self.consistency)
            .cloned()
            .collect()
    }

    /// Whether the generic-rule count disagrees with the documented claim.
    /// Reported, never treated as a failure.
    pub fn generic_count_discrepancy(&self) -> Option<i64> {
        let diff = self.generic_rule_bins as i64 - DOCUMENTED_GENERIC_RULE_BINS as i64;
        (diff != 0).then_some(diff)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coverage gaps/overlaps: {}", self.coverage.len())?;
        writeln!(f, "duplicate labels: {}", self.duplicate_labels.len())?;
        writeln!(f, "representatives outside bins: {}", self.representative_outside.len())?;
        writeln!(f, "consistency findings: {}", self.consistency.len())?;
        for line in self.findings() {
            writeln!(f, "  {line}")?;
        }
        writeln!(f, "non-f0 bins: {}", self.non_f0_bins)?;
        write!(
            f,
            "generic-rule bins: {} (documented: {})",
            self.generic_rule_bins, DOCUMENTED_GENERIC_RULE_BINS
        )?;
        if let Some(d) = self.generic_count_discrepancy() {
            write!(f, " [discrepancy {d:+}]")?;
        }
        writeln!(f)?;
        write!(f, "inert overrides: {}", self.inert_overrides.join(", "))
    }
}
