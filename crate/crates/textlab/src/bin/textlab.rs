//! Command-line front end: parse flags, build a run configuration, and
//! hand off to the library's pipeline. All analysis logic lives in the
//! library; this file only maps flags onto [`RunConfig`] and errors onto
//! exit codes (0 success, 1 analysis error, 2 configuration error).

use std::path::PathBuf;
use std::process;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use textlab::error::Result;
use textlab::pipeline::{run, Analysis, RunConfig};

#[derive(Parser)]
#[command(
    name = "textlab",
    version,
    about = "Corpus analytics: similarity, stylometry, markers, embeddings, bias, attribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every analysis. Unset flags fall back to the config
/// file (if given), then to built-in defaults.
#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Corpus file (JSONL, one record per line)
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,

    /// Output directory for reports [default: textlab-out]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Config file with key=value lines; flags override its settings
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Global random seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,

    /// Similarity metric: cosine or edit [default: cosine]
    #[arg(long)]
    metric: Option<String>,

    /// Per-cell cap on sampled text pairs [default: 10000]
    #[arg(long)]
    pair_budget: Option<usize>,

    /// Also dump every sampled pair score to CSV
    #[arg(long)]
    dump_pairs: bool,

    /// Words per minute for reading-time estimates [default: 238]
    #[arg(long)]
    wpm: Option<f64>,

    /// File of easy words for the difficult-word count (one per line)
    #[arg(long, value_name = "FILE")]
    easy_words: Option<PathBuf>,

    /// Markers to keep per author [default: 25]
    #[arg(long)]
    k: Option<usize>,

    /// Minimum (word, author) count for marker scoring [default: 5]
    #[arg(long)]
    min_count: Option<u64>,

    /// Drop stop words before marker scoring
    #[arg(long)]
    remove_stopwords: bool,

    /// Stop-word file overriding the built-in list (one per line)
    #[arg(long, value_name = "FILE")]
    stopwords: Option<PathBuf>,

    /// Embedding dimension [default: 50]
    #[arg(long)]
    dim: Option<usize>,

    /// Context window size for embedding training [default: 5]
    #[arg(long)]
    window: Option<usize>,

    /// Embedding training epochs [default: 5]
    #[arg(long)]
    epochs: Option<usize>,

    /// Comma-separated word-pair files, one bias axis each
    /// [default: built-in gender and race axes]
    #[arg(long, value_name = "FILES", value_delimiter = ',')]
    axes: Option<Vec<PathBuf>>,

    /// Neutral-word file for the bias audit [default: built-in list]
    #[arg(long, value_name = "FILE")]
    neutral: Option<PathBuf>,

    /// Attribution head: nb or logreg [default: nb]
    #[arg(long)]
    head: Option<String>,

    /// Vocabulary cap for attribution features [default: 50000]
    #[arg(long)]
    max_features: Option<usize>,

    /// Attribution feature weighting: tf, binary, or tfidf [default: tf]
    #[arg(long)]
    feature_weighting: Option<String>,

    /// Document-vector export weighting: tf or tfidf [default: tf]
    #[arg(long)]
    weighting: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the corpus and summarize records, authors, and prompts
    Validate(CommonArgs),
    /// Inner- and inter-author similarity distributions
    Similarity(CommonArgs),
    /// Per-author readability statistics and corpus measures
    Stylometry(CommonArgs),
    /// Author-specific language markers (PMI) and word clouds
    Markers(CommonArgs),
    /// Train per-author word embeddings
    Embed(CommonArgs),
    /// Bias audit over previously trained embeddings
    Bias(CommonArgs),
    /// Train and evaluate a bag-of-words authorship classifier
    Classify(CommonArgs),
    /// Export labeled per-document term vectors
    Vectors(CommonArgs),
    /// Run every analysis in dependency order
    All(CommonArgs),
}

impl Command {
    fn split(self) -> (Analysis, CommonArgs) {
        match self {
            Command::Validate(a) => (Analysis::Validate, a),
            Command::Similarity(a) => (Analysis::Similarity, a),
            Command::Stylometry(a) => (Analysis::Stylometry, a),
            Command::Markers(a) => (Analysis::Markers, a),
            Command::Embed(a) => (Analysis::Embed, a),
            Command::Bias(a) => (Analysis::Bias, a),
            Command::Classify(a) => (Analysis::Classify, a),
            Command::Vectors(a) => (Analysis::Vectors, a),
            Command::All(a) => (Analysis::All, a),
        }
    }
}

fn build_config(args: CommonArgs) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        config.apply_config_file(path)?;
    }
    if let Some(v) = args.corpus {
        config.corpus = v;
    }
    if let Some(v) = args.out {
        config.out = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.metric {
        config.metric = v.parse()?;
    }
    if let Some(v) = args.pair_budget {
        config.pair_budget = v;
    }
    if args.dump_pairs {
        config.dump_pairs = true;
    }
    if let Some(v) = args.wpm {
        config.apply_key("wpm", &v.to_string())?;
    }
    if let Some(v) = args.easy_words {
        config.easy_words = Some(v);
    }
    if let Some(v) = args.k {
        config.markers_k = v;
    }
    if let Some(v) = args.min_count {
        config.min_count = v;
    }
    if args.remove_stopwords {
        config.remove_stopwords = true;
    }
    if let Some(v) = args.stopwords {
        config.stopwords = Some(v);
    }
    if let Some(v) = args.dim {
        config.dim = v;
    }
    if let Some(v) = args.window {
        config.window = v;
    }
    if let Some(v) = args.epochs {
        config.epochs = v;
    }
    if let Some(v) = args.axes {
        config.axes = v;
    }
    if let Some(v) = args.neutral {
        config.neutral = Some(v);
    }
    if let Some(v) = args.head {
        config.head = v.parse()?;
    }
    if let Some(v) = args.max_features {
        config.max_features = v;
    }
    if let Some(v) = args.feature_weighting {
        config.feature_weighting = v.parse()?;
    }
    if let Some(v) = args.weighting {
        config.vector_weighting = v.parse()?;
    }
    Ok(config)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            process::exit(code);
        }
    };
    let (analysis, args) = cli.command.split();
    let outcome = build_config(args).and_then(|config| run(analysis, &config));
    if let Err(err) = outcome {
        eprintln!("textlab: {err}");
        process::exit(err.exit_code());
    }
}
