//! Corpus evaluation: bin accuracy before and after synthesis, the
//! cumulative family ablation, the refinement-budget sweep and the rate
//! bookkeeping.

mod corpus;
mod rate;

pub use corpus::{load_corpus, synthetic_corpus, Sound, SoundKind};
pub use rate::{rate_report, FeatureEntropy, RateReport};

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{LacError, Result};
use crate::features::FeatureVector;
use crate::refine::{refine, select_best, Candidate, RefineConfig};
use crate::renderer::decode_targets;
use crate::textcodec::{encode, seed_of, LexicalCode, Parser};
use crate::vocab::{Family, FamilySet, FeatureId, LabelIndex, Vocabulary, FEATURE_COUNT};

/// Refinement budgets of the sweep.
pub const SWEEP_BUDGETS: [usize; 6] = [1, 16, 32, 64, 128, 256];

/// One bin per slot; `None` where no value was recovered.
pub type Bins = [Option<LabelIndex>; FEATURE_COUNT];

/// Fraction of the 47 slots whose labels agree.
pub fn bin_accuracy(a: &LexicalCode, b: &LexicalCode) -> f64 {
    let same = FeatureId::all().filter(|&f| a.index(f) == b.index(f)).count();
    same as f64 / FEATURE_COUNT as f64
}

/// Agreement over the features of `families`; `None` for the empty set.
pub fn family_accuracy(code: &LexicalCode, recovered: &Bins, families: FamilySet) -> Option<f64> {
    let included: Vec<_> = FeatureId::all().filter(|&f| families.includes(f)).collect();
    if included.is_empty() {
        return None;
    }
    Some(matches(code, recovered, included.iter().copied()) as f64 / included.len() as f64)
}

/// Agreement over all 47 slots, counting unrecovered slots as misses.
pub fn full_accuracy(code: &LexicalCode, recovered: &Bins) -> f64 {
    matches(code, recovered, FeatureId::all()) as f64 / FEATURE_COUNT as f64
}

fn matches(code: &LexicalCode, recovered: &Bins, features: impl Iterator<Item = FeatureId>) -> usize {
    features
        .filter(|&f| recovered[f.index()] == Some(code.index(f)))
        .count()
}

/// Quantizes `values`; features outside `families`, and values no bin
/// accepts, stay unrecovered.
pub fn quantize_bins(vocab: &Vocabulary, values: &FeatureVector, families: FamilySet) -> Bins {
    let mut bins = [None; FEATURE_COUNT];
    for f in FeatureId::all().filter(|&f| families.includes(f)) {
        bins[f.index()] = vocab.quantize(f, values.get(f)).ok();
    }
    bins
}

/// Mean with a 95% interval of ±1.96 standard errors, plus the median.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sem: f64,
    pub ci95: f64,
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary {
                n,
                mean: f64::NAN,
                sem: f64::NAN,
                ci95: f64::NAN,
                median: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sem = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        Summary {
            n,
            mean,
            sem,
            ci95: 1.96 * sem,
            median,
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.4} ± {:.4} (median {:.4}, n={})",
            self.mean, self.ci95, self.median, self.n
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub families: FamilySet,
    pub refine: RefineConfig,
    /// Worker threads; 0 uses rayon's default.
    pub jobs: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            families: FamilySet::ALL,
            refine: RefineConfig::default(),
            jobs: 0,
        }
    }
}

fn par_map<T: Send>(jobs: usize, corpus: &[Sound], f: impl Fn(&Sound) -> T + Sync + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| LacError::InvalidConfig(format!("thread pool: {e}")))?;
    Ok(pool.install(|| corpus.par_iter().map(&f).collect()))
}

/// Per-sound outcome.
#[derive(Debug, Clone)]
pub struct SoundResult {
    pub name: String,
    pub original: LexicalCode,
    pub recovered: Bins,
    /// Over the included families.
    pub accuracy: Option<f64>,
    /// Over all 47 slots.
    pub full_accuracy: f64,
    pub violations: Option<usize>,
    pub score: Option<f64>,
    pub evaluations: usize,
    pub runtime: Duration,
}

#[derive(Debug, Clone)]
pub struct CorpusResult {
    pub families: FamilySet,
    /// `None` for pre-synthesis results.
    pub budget: Option<usize>,
    pub sounds: Vec<SoundResult>,
}

impl CorpusResult {
    pub fn accuracy(&self) -> Summary {
        Summary::of(&self.sounds.iter().filter_map(|s| s.accuracy).collect::<Vec<_>>())
    }

    pub fn full_accuracy(&self) -> Summary {
        Summary::of(&self.sounds.iter().map(|s| s.full_accuracy).collect::<Vec<_>>())
    }

    pub fn runtime(&self) -> Duration {
        self.sounds.iter().map(|s| s.runtime).sum()
    }

    /// Sounds per minute of summed per-sound runtime.
    pub fn throughput(&self) -> f64 {
        throughput(self.sounds.len(), self.runtime())
    }
}

fn throughput(n: usize, total: Duration) -> f64 {
    n as f64 * 60.0 / total.as_secs_f64().max(1e-9)
}

fn families_label(families: FamilySet) -> String {
    if families == FamilySet::EMPTY {
        return "none".into();
    }
    families.families().map(Family::name).collect::<Vec<_>>().join("+")
}

/// Lexical-layer accuracy: every sound is encoded, verbalized, parsed and
/// inverted to representatives, which are quantized again and compared with
/// the transmitted bins.
pub fn pre_synthesis_accuracy(vocab: &Vocabulary, corpus: &[Sound], families: FamilySet) -> Result<CorpusResult> {
    let parser = Parser::new(vocab);
    let sounds = corpus
        .iter()
        .map(|s| {
            let t0 = Instant::now();
            let enc = encode(vocab, &s.waveform)?;
            let code = parser.parse(vocab, &enc.sentence)?;
            let targets = decode_targets(&code, vocab)?.restrict(families);
            let recovered = quantize_bins(vocab, targets.values(), families);
            Ok(SoundResult {
                name: s.name.clone(),
                original: enc.code,
                accuracy: family_accuracy(&enc.code, &recovered, families),
                full_accuracy: full_accuracy(&enc.code, &recovered),
                recovered,
                violations: None,
                score: None,
                evaluations: 0,
                runtime: t0.elapsed(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorpusResult {
        families,
        budget: None,
        sounds,
    })
}

/// A full closed-loop decode of one sound from the families in `options`.
#[derive(Debug, Clone)]
pub struct SoundRun {
    pub name: String,
    pub code: LexicalCode,
    pub candidates: Vec<Candidate>,
    pub timeline: Vec<Duration>,
    /// Encoding plus the final render.
    pub overhead: Duration,
}

impl SoundRun {
    /// Selection and its elapsed time when only the first `budget`
    /// evaluations are allowed.
    pub fn at_budget(&self, budget: usize) -> Result<(usize, Duration)> {
        let n = budget.min(self.candidates.len());
        let idx = select_best(&self.candidates[..n])?;
        Ok((idx, self.timeline[n - 1] + self.overhead))
    }

    fn result(&self, vocab: &Vocabulary, families: FamilySet, budget: usize) -> Result<SoundResult> {
        let (idx, runtime) = self.at_budget(budget)?;
        let best = &self.candidates[idx];
        let recovered = quantize_bins(vocab, &best.features, FamilySet::ALL);
        Ok(SoundResult {
            name: self.name.clone(),
            original: self.code,
            accuracy: family_accuracy(&self.code, &recovered, families),
            full_accuracy: full_accuracy(&self.code, &recovered),
            recovered,
            violations: Some(best.violations),
            score: Some(best.score),
            evaluations: budget.min(self.candidates.len()),
            runtime,
        })
    }
}

/// Encodes and decodes every sound with the options' families and budget.
/// Features outside the families are rendered from defaults.
pub fn run_corpus(vocab: &Vocabulary, corpus: &[Sound], options: &EvalOptions) -> Result<Vec<SoundRun>> {
    options.refine.validate()?;
    let runs = par_map(options.jobs, corpus, |s| -> Result<SoundRun> {
        let t0 = Instant::now();
        let enc = encode(vocab, &s.waveform)?;
        let targets = decode_targets(&enc.code, vocab)?.restrict(options.families);
        let encoded = t0.elapsed();
        let r = refine(targets, seed_of(vocab, &enc.code), &options.refine)?;
        let render = r
            .elapsed
            .saturating_sub(*r.timeline.last().expect("at least one candidate"));
        Ok(SoundRun {
            name: s.name.clone(),
            code: enc.code,
            candidates: r.candidates,
            timeline: r.timeline,
            overhead: encoded + render,
        })
    })?;
    runs.into_iter().collect()
}

fn results_at(vocab: &Vocabulary, runs: &[SoundRun], families: FamilySet, budget: usize) -> Result<CorpusResult> {
    Ok(CorpusResult {
        families,
        budget: Some(budget),
        sounds: runs
            .iter()
            .map(|r| r.result(vocab, families, budget))
            .collect::<Result<_>>()?,
    })
}

/// Post-synthesis accuracy: decode, re-extract and compare with the
/// transmitted code.
pub fn post_synthesis_accuracy(vocab: &Vocabulary, corpus: &[Sound], options: &EvalOptions) -> Result<CorpusResult> {
    let runs = run_corpus(vocab, corpus, options)?;
    results_at(vocab, &runs, options.families, options.refine.budget)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub budget: usize,
    pub result: CorpusResult,
}

/// Accuracy and throughput against the refinement budget. Each sound is
/// refined once at the largest budget and every smaller budget is read off
/// the same candidate sequence, which is what a run with that budget would
/// have produced.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub runs: Vec<SoundRun>,
}

pub fn budget_sweep(vocab: &Vocabulary, corpus: &[Sound], budgets: &[usize], options: &EvalOptions) -> Result<Sweep> {
    let max = *budgets
        .iter()
        .max()
        .ok_or_else(|| LacError::InvalidConfig("no budgets".into()))?;
    if budgets.contains(&0) {
        return Err(LacError::InvalidConfig("budget must be at least 1".into()));
    }
    let options = EvalOptions {
        refine: options.refine.with_budget(max),
        ..*options
    };
    let runs = run_corpus(vocab, corpus, &options)?;
    let rows = budgets
        .iter()
        .map(|&budget| {
            Ok(SweepRow {
                budget,
                result: results_at(vocab, &runs, options.families, budget)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep { rows, runs })
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "budget\tmean\tci95\tmedian\tviolations\tsounds_per_min")?;
        for row in &self.rows {
            let acc = row.result.accuracy();
            let viol = Summary::of(
                &row.result
                    .sounds
                    .iter()
                    .filter_map(|s| s.violations.map(|v| v as f64))
                    .collect::<Vec<_>>(),
            );
            writeln!(
                f,
                "{}\t{:.4}\t{:.4}\t{:.4}\t{:.2}\t{:.2}",
                row.budget,
                acc.mean,
                acc.ci95,
                acc.median,
                viol.mean,
                row.result.throughput()
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AblationRow {
    pub families: FamilySet,
    pub pre: CorpusResult,
    pub post: CorpusResult,
}

/// Cumulative family ablation, from no families up to all five.
#[derive(Debug, Clone)]
pub struct Ablation {
    pub rows: Vec<AblationRow>,
}

impl Ablation {
    /// Gain in mean full-code post-synthesis accuracy from adding each
    /// family to the prefix before it.
    pub fn deltas(&self) -> Vec<(Family, f64)> {
        self.rows
            .windows(2)
            .zip(Family::ALL)
            .map(|(w, fam)| (fam, w[1].post.full_accuracy().mean - w[0].post.full_accuracy().mean))
            .collect()
    }

    /// The family with the largest gain.
    pub fn largest_gain(&self) -> Option<Family> {
        self.deltas()
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(fam, _)| fam)
    }
}

pub fn ablation(vocab: &Vocabulary, corpus: &[Sound], options: &EvalOptions) -> Result<Ablation> {
    let rows = (0..=Family::ALL.len())
        .map(|k| {
            let families = FamilySet::prefix(k);
            let opts = EvalOptions { families, ..*options };
            Ok(AblationRow {
                families,
                pre: pre_synthesis_accuracy(vocab, corpus, families)?,
                post: post_synthesis_accuracy(vocab, corpus, &opts)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Ablation { rows })
}

impl fmt::Display for Ablation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "families\tfeatures\tpre_full\tpre_full_ci95\tpost_full\tpost_full_ci95\tpost_included\tpost_included_ci95\tdelta"
        )?;
        let deltas = self.deltas();
        for (i, row) in self.rows.iter().enumerate() {
            let (pre, post, inc) = (row.pre.full_accuracy(), row.post.full_accuracy(), row.post.accuracy());
            let delta = i
                .checked_sub(1)
                .map_or("-".to_string(), |j| format!("{:+.4}", deltas[j].1));
            writeln!(
                f,
                "{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}",
                families_label(row.families),
                row.families.feature_count(),
                pre.mean,
                pre.ci95,
                post.mean,
                post.ci95,
                inc.mean,
                inc.ci95,
                delta
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
