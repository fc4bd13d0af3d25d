use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lac_core::eval::{self, EvalOptions, Sound};
use lac_core::features::{read_wav, write_wav, SampleFormat};
use lac_core::refine::{refine, DecodeReport, RefineConfig};
use lac_core::renderer::decode_targets;
use lac_core::textcodec::{canonical_tokens, encode, seed_of, Parser};
use lac_core::vocab::{FamilySet, Vocabulary};

use crate::{Cli, Command, EvalMode, Format, RenderArgs, VocabAction};

pub fn run(cli: Cli) -> Result<()> {
    let vocab = match &cli.vocab {
        Some(path) => Vocabulary::load(path)?,
        None => Vocabulary::build_default()?,
    };
    match cli.command {
        Command::Encode { inputs, code } => encode_cmd(&vocab, &inputs, code),
        Command::Decode {
            sentence,
            output,
            report,
            render,
        } => decode_cmd(&vocab, sentence.as_deref(), &output, report.as_deref(), &render),
        Command::Roundtrip {
            input,
            output,
            families,
            render,
        } => roundtrip_cmd(&vocab, &input, output.as_deref(), &families, &render),
        Command::Vocab { action } => vocab_cmd(&vocab, action),
        Command::Eval {
            mode,
            corpus,
            synthetic,
            seed,
            budgets,
            families,
            jobs,
            render,
        } => {
            let sounds = load(corpus.as_deref(), synthetic, seed)?;
            let options = EvalOptions {
                families: FamilySet::parse(&families)?,
                refine: refine_config(&render)?,
                jobs,
            };
            eval_cmd(&vocab, &sounds, mode, &budgets, &options)
        }
    }
}

fn refine_config(args: &RenderArgs) -> Result<RefineConfig> {
    let config = RefineConfig {
        budget: args.budget,
        reg_weight: args.reg_weight,
        target_len: args.target_len,
        ..RefineConfig::default()
    };
    config.validate()?;
    Ok(config)
}

fn sample_format(f: Format) -> SampleFormat {
    match f {
        Format::Pcm16 => SampleFormat::Pcm16,
        Format::Float32 => SampleFormat::Float32,
    }
}

fn read_input(path: &Path) -> Result<lac_core::Waveform> {
    let input = read_wav(path)?;
    if input.channels > 1 {
        eprintln!(
            "warning: {} has {} channels; mixing down to mono",
            path.display(),
            input.channels
        );
    }
    Ok(input.waveform)
}

fn encode_cmd(vocab: &Vocabulary, inputs: &[PathBuf], show_code: bool) -> Result<()> {
    let mut out = std::io::stdout().lock();
    for path in inputs {
        let enc = encode(vocab, &read_input(path)?).with_context(|| path.display().to_string())?;
        writeln!(out, "{}", enc.sentence)?;
        if show_code {
            writeln!(out, "# seed {}", seed_of(vocab, &enc.code))?;
            writeln!(out, "# {}", canonical_tokens(vocab, &enc.code))?;
        }
    }
    Ok(())
}

fn read_sentence(path: Option<&Path>) -> Result<String> {
    let mut text = String::new();
    match path {
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
        Some(p) if p == Path::new("-") => {
            std::io::stdin().read_to_string(&mut text)?;
        }
        Some(p) => {
            text = std::fs::read_to_string(p).with_context(|| p.display().to_string())?;
        }
    }
    Ok(text)
}

fn emit_report(report: &DecodeReport, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, report.to_string()).with_context(|| p.display().to_string())?,
        None => eprint!("{report}"),
    }
    Ok(())
}

fn decode_cmd(
    vocab: &Vocabulary,
    sentence: Option<&Path>,
    output: &Path,
    report: Option<&Path>,
    args: &RenderArgs,
) -> Result<()> {
    let config = refine_config(args)?;
    let text = read_sentence(sentence)?;
    let decoded = lac_core::decode(text.trim(), vocab, &config)?;
    write_wav(output, &decoded.waveform, sample_format(args.format))?;
    emit_report(&decoded.report, report)
}

fn roundtrip_cmd(
    vocab: &Vocabulary,
    input: &Path,
    output: Option<&Path>,
    families: &str,
    args: &RenderArgs,
) -> Result<()> {
    let families = FamilySet::parse(families)?;
    let config = refine_config(args)?;
    let enc = encode(vocab, &read_input(input)?)?;
    let code = Parser::new(vocab).parse(vocab, &enc.sentence)?;
    let targets = decode_targets(&code, vocab)?.restrict(families);
    let pre = eval::quantize_bins(vocab, targets.values(), families);
    let seed = seed_of(vocab, &code);
    let r = refine(targets, seed, &config)?;
    let post = eval::quantize_bins(vocab, &r.best().features, lac_core::FamilySet::ALL);
    let fmt = |a: Option<f64>| a.map_or("n/a".to_string(), |v| format!("{v:.4}"));

    let mut out = std::io::stdout().lock();
    writeln!(out, "sentence\t{}", enc.sentence)?;
    writeln!(out, "seed\t{seed}")?;
    writeln!(out, "families\t{families}")?;
    writeln!(
        out,
        "pre_accuracy\t{}",
        fmt(eval::family_accuracy(&code, &pre, families))
    )?;
    writeln!(
        out,
        "post_accuracy\t{}",
        fmt(eval::family_accuracy(&code, &post, families))
    )?;
    writeln!(out, "post_accuracy_all\t{:.4}", eval::full_accuracy(&code, &post))?;
    writeln!(out, "violations\t{}", r.best().violations)?;
    writeln!(out, "score\t{:.6}", r.best().score)?;
    writeln!(out, "evaluations\t{}", r.candidates.len())?;
    if let Some(path) = output {
        write_wav(path, &r.waveform, sample_format(args.format))?;
    }
    Ok(())
}

fn vocab_cmd(vocab: &Vocabulary, action: VocabAction) -> Result<()> {
    match action {
        VocabAction::Dump => print!("{}", vocab.to_text()),
        VocabAction::Validate => {
            let report = vocab.validate();
            println!("{report}");
            if !report.is_clean() {
                bail!("vocabulary has {} findings", report.findings().len());
            }
        }
        VocabAction::Bits => println!("{:.6}", vocab.max_bits()),
    }
    Ok(())
}

fn load(dir: Option<&Path>, n: usize, seed: u64) -> Result<Vec<Sound>> {
    let sounds = match dir {
        Some(d) => {
            let (sounds, warnings) = eval::load_corpus(d)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            sounds
        }
        None => eval::synthetic_corpus(n, seed),
    };
    if sounds.is_empty() {
        bail!("the corpus is empty");
    }
    Ok(sounds)
}

fn eval_cmd(vocab: &Vocabulary, sounds: &[Sound], mode: EvalMode, budgets: &str, options: &EvalOptions) -> Result<()> {
    match mode {
        EvalMode::Ablation => {
            let table = eval::ablation(vocab, sounds, options)?;
            print!("{table}");
            if let Some(f) = table.largest_gain() {
                println!("largest_gain\t{}", f.name());
            }
        }
        EvalMode::Sweep => {
            let budgets: Vec<usize> = budgets
                .split(',')
                .map(|b| b.trim().parse().with_context(|| format!("bad budget `{b}`")))
                .collect::<Result<_>>()?;
            print!("{}", eval::budget_sweep(vocab, sounds, &budgets, options)?);
        }
        EvalMode::Rate => {
            let codes = sounds
                .iter()
                .map(|s| encode(vocab, &s.waveform).map(|e| e.code))
                .collect::<lac_core::Result<Vec<_>>>()?;
            let report = eval::rate_report(vocab, &codes);
            print!("{report}");
            let failures = report.check();
            if !failures.is_empty() {
                bail!("rate bounds violated: {}", failures.join("; "));
            }
        }
    }
    Ok(())
}
