//! Rate bookkeeping: the worst-case budget against empirical entropy.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::textcodec::LexicalCode;
use crate::vocab::{FeatureId, Vocabulary};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureEntropy {
    pub feature: FeatureId,
    /// Plug-in entropy of the observed labels, in bits.
    pub entropy: f64,
    /// `log2 |alphabet|`.
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub sounds: usize,
    /// Worst-case bits per sound.
    pub b_max: f64,
    pub features: Vec<FeatureEntropy>,
    /// Sum of the marginal entropies; an upper bound on the joint entropy.
    pub summed_entropy: f64,
    /// Number of distinct codes observed.
    pub support: usize,
    pub log2_support: f64,
}

impl RateReport {
    /// Every bound the report should satisfy, with a description of each
    /// failure.
    pub fn check(&self) -> Vec<String> {
        let tol = 1e-9;
        let mut failures = Vec::new();
        if self.summed_entropy > self.b_max + tol {
            failures.push(format!(
                "summed entropy {} exceeds B_max {}",
                self.summed_entropy, self.b_max
            ));
        }
        if self.log2_support > self.b_max + tol {
            failures.push(format!(
                "log2 support {} exceeds B_max {}",
                self.log2_support, self.b_max
            ));
        }
        if self.log2_support > (self.sounds as f64).log2() + tol {
            failures.push(format!("log2 support {} exceeds log2 N", self.log2_support));
        }
        for f in &self.features {
            if f.entropy > f.capacity + tol {
                failures.push(format!(
                    "{} entropy {} exceeds {}",
                    f.feature.name(),
                    f.entropy,
                    f.capacity
                ));
            }
        }
        failures
    }
}

fn entropy(counts: impl Iterator<Item = usize>, n: usize) -> f64 {
    counts
        .map(|c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

pub fn rate_report(vocab: &Vocabulary, codes: &[LexicalCode]) -> RateReport {
    let n = codes.len();
    let features: Vec<FeatureEntropy> = FeatureId::all()
        .map(|f| {
            let mut counts: HashMap<u16, usize> = HashMap::new();
            for c in codes {
                *counts.entry(c.index(f)).or_default() += 1;
            }
            FeatureEntropy {
                feature: f,
                entropy: if n == 0 { 0.0 } else { entropy(counts.into_values(), n) },
                capacity: (vocab.alphabet_size(f) as f64).log2(),
            }
        })
        .collect();
    let support = codes.iter().collect::<BTreeSet<_>>().len();
    RateReport {
        sounds: n,
        b_max: vocab.max_bits(),
        summed_entropy: features.iter().map(|f| f.entropy).sum(),
        features,
        support,
        log2_support: if support == 0 { 0.0 } else { (support as f64).log2() },
    }
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sounds\t{}", self.sounds)?;
        writeln!(f, "b_max_bits\t{:.4}", self.b_max)?;
        writeln!(f, "summed_marginal_entropy_bits\t{:.4}", self.summed_entropy)?;
        writeln!(f, "distinct_codes\t{}", self.support)?;
        writeln!(f, "log2_support_bits\t{:.4}", self.log2_support)?;
        writeln!(f, "feature\tentropy_bits\tcapacity_bits")?;
        for e in &self.features {
            writeln!(f, "{}\t{:.4}\t{:.4}", e.feature.name(), e.entropy, e.capacity)?;
        }
        Ok(())
    }
}
