//! Closed-loop refinement: render, re-extract, score against the lexical
//! intervals and search the renderer controls with Powell's method.

mod powell;

pub use powell::{powell_minimize, Evaluation, Stop, LINE_TOLERANCE, SWEEP_TOLERANCE};

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{LacError, Result};
use crate::features::{extract, FeatureVector, Waveform};
use crate::renderer::{decode_targets, init_controls, render, ControlVector, RenderSpec, Targets, CONTROL_COUNT};
use crate::textcodec::{seed_of, LexicalCode, Parser};
use crate::vocab::{FeatureId, Interval, IntervalKind, Vocabulary};

/// Penalty for a feature whose definedness disagrees with its bin.
pub const DEFINEDNESS_PENALTY: f64 = 1.0;
pub const DEFAULT_BUDGET: usize = 64;
pub const DEFAULT_REG_WEIGHT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    /// Maximum number of render+extract evaluations, at least 1.
    pub budget: usize,
    /// Weight of the squared distance to the initial controls, in unit-box
    /// coordinates.
    pub reg_weight: f64,
    /// Stop searching at the first candidate that sits inside every bin.
    pub stop_when_satisfied: bool,
    /// Force the output length in samples.
    pub target_len: Option<usize>,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            budget: DEFAULT_BUDGET,
            reg_weight: DEFAULT_REG_WEIGHT,
            stop_when_satisfied: false,
            target_len: None,
        }
    }
}

impl RefineConfig {
    pub fn with_budget(self, budget: usize) -> RefineConfig {
        RefineConfig { budget, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(LacError::InvalidConfig("budget must be at least 1".into()));
        }
        if !(self.reg_weight >= 0.0 && self.reg_weight.is_finite()) {
            return Err(LacError::InvalidConfig(format!(
                "regularization weight {} must be finite and non-negative",
                self.reg_weight
            )));
        }
        Ok(())
    }
}

/// One evaluated control setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub controls: ControlVector,
    pub features: FeatureVector,
    pub violations: usize,
    pub score: f64,
}

/// Normalization for a miss on `interval`: the width of a finite bin, or
/// `|representative| + 1` for an open-ended one.
fn scale_of(interval: Interval, representative: Option<f64>) -> f64 {
    match interval.width() {
        Some(w) if w > 0.0 => w,
        _ => representative.map_or(1.0, |r| r.abs() + 1.0),
    }
}

fn feature_miss(interval: Interval, representative: Option<f64>, value: Option<f64>) -> f64 {
    match (interval.kind(), value) {
        (IntervalKind::Sentinel, None) => 0.0,
        (IntervalKind::Sentinel, Some(_)) | (_, None) => DEFINEDNESS_PENALTY,
        (_, Some(v)) => interval.distance(v) / scale_of(interval, representative),
    }
}

/// Interval mismatch of `features` against the constrained slots of
/// `targets`: zero inside every bin, growing linearly outside.
pub fn mismatch_targets(features: &FeatureVector, targets: &Targets) -> f64 {
    FeatureId::all()
        .filter_map(|f| {
            targets
                .interval(f)
                .map(|i| feature_miss(i, targets.value(f), features.get(f)))
        })
        .sum()
}

/// Interval mismatch of `features` against every bin of `code`.
pub fn mismatch(features: &FeatureVector, code: &LexicalCode, vocab: &Vocabulary) -> f64 {
    FeatureId::all()
        .map(|f| {
            let e = vocab.entry(f, code.index(f));
            feature_miss(e.interval, e.representative, features.get(f))
        })
        .sum()
}

/// Constrained features whose value falls outside the target bin.
pub fn violated_features(features: &FeatureVector, targets: &Targets) -> Vec<FeatureId> {
    FeatureId::all()
        .filter(|&f| targets.interval(f).is_some_and(|i| !i.contains(features.get(f))))
        .collect()
}

pub fn violations(features: &FeatureVector, targets: &Targets) -> usize {
    violated_features(features, targets).len()
}

/// Index of the lexicographic minimum over `(violations, score)`, earliest
/// first on ties.
pub fn select_best(candidates: &[Candidate]) -> Result<usize> {
    candidates
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.violations
                .cmp(&b.violations)
                .then(a.score.total_cmp(&b.score))
                .then(i.cmp(j))
        })
        .map(|(i, _)| i)
        .ok_or(LacError::EmptyCandidates)
}

/// Renders and scores control settings for one fixed set of targets, seed
/// and length.
#[derive(Debug, Clone)]
pub struct Objective {
    spec: RenderSpec,
    start: [f64; CONTROL_COUNT],
    reg_weight: f64,
}

impl Objective {
    pub fn new(targets: Targets, seed: u32, config: &RefineConfig) -> Result<Objective> {
        config.validate()?;
        let init = init_controls(&targets);
        let start = init.to_unit();
        let spec = RenderSpec::new(targets, init, seed, config.target_len)?;
        Ok(Objective {
            spec,
            start,
            reg_weight: config.reg_weight,
        })
    }

    pub fn initial_controls(&self) -> ControlVector {
        ControlVector::from_unit(&self.start).expect("initial controls are finite")
    }

    pub fn spec(&self) -> &RenderSpec {
        &self.spec
    }

    pub fn render(&self, controls: &ControlVector) -> Result<Waveform> {
        render(&self.spec.with_controls(*controls))
    }

    /// `λ·‖u − u₀‖²` in unit-box coordinates.
    pub fn regularizer(&self, controls: &ControlVector) -> f64 {
        let u = controls.to_unit();
        self.reg_weight * u.iter().zip(&self.start).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
    }

    /// Renders, re-extracts and scores one setting.
    pub fn evaluate(&self, controls: &ControlVector) -> Result<Candidate> {
        let features = extract(&self.render(controls)?)?;
        let targets = self.spec.targets();
        Ok(Candidate {
            controls: *controls,
            violations: violations(&features, targets),
            score: mismatch_targets(&features, targets) + self.regularizer(controls),
            features,
        })
    }
}

/// Result of a refinement run.
#[derive(Debug, Clone)]
pub struct Refinement {
    /// Every evaluated candidate in evaluation order.
    pub candidates: Vec<Candidate>,
    /// Time elapsed when each candidate finished.
    pub timeline: Vec<Duration>,
    pub selected: usize,
    pub waveform: Waveform,
    pub elapsed: Duration,
}

impl Refinement {
    pub fn best(&self) -> &Candidate {
        &self.candidates[self.selected]
    }
}

/// Searches the controls and returns every candidate together with the
/// time elapsed when each one finished. The candidate list for a smaller
/// budget is a prefix of the one for a larger budget.
pub fn search(objective: &Objective, config: &RefineConfig) -> Result<(Vec<Candidate>, Vec<Duration>)> {
    config.validate()?;
    let t0 = Instant::now();
    let mut candidates = Vec::new();
    let mut timeline = Vec::new();
    let mut failure = None;
    powell_minimize(
        |u| {
            let unit: [f64; CONTROL_COUNT] = u.try_into().expect("control dimension");
            let c = ControlVector::from_unit(&unit).map_err(|e| {
                failure = Some(e);
                Stop
            })?;
            if config.stop_when_satisfied && candidates.last().is_some_and(|c: &Candidate| c.violations == 0) {
                return Err(Stop);
            }
            match objective.evaluate(&c) {
                Ok(cand) => {
                    let score = cand.score;
                    candidates.push(cand);
                    timeline.push(t0.elapsed());
                    Ok(score)
                }
                Err(e) => {
                    failure = Some(e);
                    Err(Stop)
                }
            }
        },
        &objective.start,
        config.budget,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok((candidates, timeline)),
    }
}

/// Full closed loop for already-decoded targets.
pub fn refine(targets: Targets, seed: u32, config: &RefineConfig) -> Result<Refinement> {
    let t0 = Instant::now();
    let objective = Objective::new(targets, seed, config)?;
    let (candidates, timeline) = search(&objective, config)?;
    let selected = select_best(&candidates)?;
    let waveform = objective.render(&candidates[selected].controls)?;
    Ok(Refinement {
        candidates,
        timeline,
        selected,
        waveform,
        elapsed: t0.elapsed(),
    })
}

/// What a decode did, for logs and the CLI.
#[derive(Debug, Clone)]
pub struct DecodeReport {
    pub seed: u32,
    pub evaluations: usize,
    pub selected: usize,
    pub violations: usize,
    pub score: f64,
    pub violated: Vec<&'static str>,
    /// `(violations, score)` per evaluation.
    pub trace: Vec<(usize, f64)>,
    pub duration_s: f64,
    pub elapsed: Duration,
}

impl DecodeReport {
    fn new(refinement: &Refinement, targets: &Targets, seed: u32) -> DecodeReport {
        let best = refinement.best();
        DecodeReport {
            seed,
            evaluations: refinement.candidates.len(),
            selected: refinement.selected,
            violations: best.violations,
            score: best.score,
            violated: violated_features(&best.features, targets)
                .iter()
                .map(|f| f.name())
                .collect(),
            trace: refinement.candidates.iter().map(|c| (c.violations, c.score)).collect(),
            duration_s: refinement.waveform.duration_s(),
            elapsed: refinement.elapsed,
        }
    }
}

impl fmt::Display for DecodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed          {}", self.seed)?;
        writeln!(f, "duration_s    {:.4}", self.duration_s)?;
        writeln!(f, "evaluations   {}", self.evaluations)?;
        writeln!(f, "selected      {}", self.selected)?;
        writeln!(f, "violations    {}", self.violations)?;
        writeln!(f, "score         {:.6}", self.score)?;
        writeln!(f, "violated      {}", self.violated.join(" "))?;
        writeln!(f, "elapsed_ms    {}", self.elapsed.as_millis())?;
        writeln!(f, "trace")?;
        for (i, (v, j)) in self.trace.iter().enumerate() {
            writeln!(f, "  {i:>4} {v:>3} {j:.6}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Decoded {
    pub code: LexicalCode,
    pub waveform: Waveform,
    pub report: DecodeReport,
}

/// Decodes a parsed code.
pub fn decode_code(code: &LexicalCode, vocab: &Vocabulary, config: &RefineConfig) -> Result<Decoded> {
    config.validate()?;
    let targets = decode_targets(code, vocab)?;
    let seed = seed_of(vocab, code);
    let refinement = refine(targets.clone(), seed, config)?;
    let report = DecodeReport::new(&refinement, &targets, seed);
    Ok(Decoded {
        code: *code,
        waveform: refinement.waveform,
        report,
    })
}

/// Receiver side of the codec: sentence in, waveform and report out.
pub fn decode(sentence: &str, vocab: &Vocabulary, config: &RefineConfig) -> Result<Decoded> {
    config.validate()?;
    let code = Parser::new(vocab).parse(vocab, sentence)?;
    decode_code(&code, vocab, config)
}

#[cfg(test)]
mod tests;
