//! `lac`: encode sounds to sentences, decode sentences to sounds, inspect
//! the vocabulary and run the corpus evaluations.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "lac", version, about = "Lexical acoustic coding")]
struct Cli {
    /// Vocabulary file; the built-in vocabulary when omitted.
    #[arg(long, global = true, env = "LAC_VOCAB")]
    vocab: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one sentence per input WAV.
    Encode {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Also print the `feature=label` tokens and the seed.
        #[arg(long)]
        code: bool,
    },
    /// Render a sentence to a WAV file.
    Decode {
        /// File holding the sentence; standard input when omitted or `-`.
        sentence: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// Write the decode report here instead of standard error.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Encode and decode in one process and report the bin accuracies.
    Roundtrip {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Comma-separated families to transmit, or `all`.
        #[arg(long, default_value = "all")]
        families: String,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Inspect the vocabulary.
    Vocab {
        #[arg(value_enum)]
        action: VocabAction,
    },
    /// Corpus evaluations.
    Eval {
        #[arg(value_enum)]
        mode: EvalMode,
        /// Directory of WAV files; a synthetic corpus when omitted.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Size of the synthetic corpus.
        #[arg(long, default_value_t = 50)]
        synthetic: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated budgets for the sweep.
        #[arg(long, default_value = "1,16,32,64,128,256")]
        budgets: String,
        /// Families for the sweep, or `all`.
        #[arg(long, default_value = "all")]
        families: String,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        render: RenderArgs,
    },
}

#[derive(Debug, Clone, Args)]
struct RenderArgs {
    /// Render+extract evaluations per decode.
    #[arg(long, default_value_t = lac_core::refine::DEFAULT_BUDGET)]
    budget: usize,
    /// Weight of the pull back toward the initial controls.
    #[arg(long, default_value_t = lac_core::refine::DEFAULT_REG_WEIGHT)]
    reg_weight: f64,
    /// Force the output length in samples.
    #[arg(long)]
    target_len: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Float32)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pcm16,
    Float32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VocabAction {
    Dump,
    Validate,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalMode {
    Ablation,
    Sweep,
    Rate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
