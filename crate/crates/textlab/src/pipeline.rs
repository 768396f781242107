//! Analysis orchestration: configuration, seeding, and report emission.
//!
//! Every analysis writes its reports under one output directory. Reports
//! embed a common envelope (tool version, seed, corpus digest, config
//! snapshot) and are emitted with fully deterministic ordering, so a
//! rerun with the same seed and corpus reproduces every analysis payload
//! byte for byte. Wall-clock timings are isolated in `run_manifest.json`,
//! which is the only output expected to differ between identical runs.
//!
//! One global seed drives everything; per-analysis seeds are derived from
//! it by fixed offsets (and per-author hashes where training is per
//! author), so no analysis perturbs another's randomness.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File};
use std::io::{BufWriter, Write as IoWrite};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::attribution::{
    run_attribution, save_model, AttributionOptions, ClassifierOptions, Head, Weighting,
};
use crate::bias::{
    association_scatter, bias_direction, direct_bias, BiasReport, NeutralWordSet, PairSet,
};
use crate::corpus::{load_corpus, tokenize, Corpus, LoadOutcome};
use crate::embedding::{save_embeddings, train_cbow, EmbeddingModel, TrainConfig};
use crate::error::{Error, Result};
use crate::markers::{compute_pmi_filtered, export_wordcloud, top_markers};
use crate::similarity::{
    export_doc_vectors, inner_similarity, inter_similarity, pair_scores, Metric, SimilarityOptions,
    VectorWeighting,
};
use crate::stylometry::{author_readability, corpus_measures};
use crate::wordlists;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed offsets deriving per-analysis seeds from the global seed.
const SIMILARITY_SEED_OFFSET: u64 = 1;
const EMBED_SEED_OFFSET: u64 = 2;
const CLASSIFY_SEED_OFFSET: u64 = 3;

/// The analyses the front end can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Validate,
    Similarity,
    Stylometry,
    Markers,
    Embed,
    Bias,
    Classify,
    Vectors,
    All,
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Validate => "validate",
            Analysis::Similarity => "similarity",
            Analysis::Stylometry => "stylometry",
            Analysis::Markers => "markers",
            Analysis::Embed => "embed",
            Analysis::Bias => "bias",
            Analysis::Classify => "classify",
            Analysis::Vectors => "vectors",
            Analysis::All => "all",
        }
    }
}

/// Full run configuration. Defaults match the documented analysis
/// defaults; a config file and then command-line flags override them.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    // similarity
    pub metric: Metric,
    pub pair_budget: usize,
    pub dump_pairs: bool,
    // stylometry
    pub wpm: f64,
    pub easy_words: Option<PathBuf>,
    // markers
    pub markers_k: usize,
    pub min_count: u64,
    pub remove_stopwords: bool,
    pub stopwords: Option<PathBuf>,
    // embedding
    pub dim: usize,
    pub window: usize,
    pub epochs: usize,
    // bias
    pub axes: Vec<PathBuf>,
    pub neutral: Option<PathBuf>,
    // attribution
    pub head: Head,
    pub max_features: usize,
    pub feature_weighting: Weighting,
    // vector export
    pub vector_weighting: VectorWeighting,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: PathBuf::new(),
            out: PathBuf::from("textlab-out"),
            seed: 0,
            metric: Metric::Cosine,
            pair_budget: 10_000,
            dump_pairs: false,
            wpm: 238.0,
            easy_words: None,
            markers_k: 25,
            min_count: 5,
            remove_stopwords: false,
            stopwords: None,
            dim: 50,
            window: 5,
            epochs: 5,
            axes: Vec::new(),
            neutral: None,
            head: Head::Nb,
            max_features: 50_000,
            feature_weighting: Weighting::Tf,
            vector_weighting: VectorWeighting::Tf,
        }
    }
}

impl RunConfig {
    /// Apply one `key=value` setting (config-file syntax; keys spelled
    /// like the corresponding long flags).
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        let parse_bool = |v: &str| match v {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            other => Err(Error::Config(format!("expected a boolean, got {other:?}"))),
        };
        let bad = |what: &str, v: &str| Error::Config(format!("bad {what}: {v:?}"));
        match key {
            "corpus" => self.corpus = PathBuf::from(value),
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|_| bad("seed", value))?,
            "metric" => self.metric = value.parse()?,
            "pair-budget" => {
                self.pair_budget = value.parse().map_err(|_| bad("pair budget", value))?
            }
            "dump-pairs" => self.dump_pairs = parse_bool(value)?,
            "wpm" => {
                self.wpm = value.parse().map_err(|_| bad("wpm", value))?;
                if self.wpm <= 0.0 {
                    return Err(Error::Config(format!("wpm must be positive, got {value}")));
                }
            }
            "easy-words" => self.easy_words = Some(PathBuf::from(value)),
            "k" => self.markers_k = value.parse().map_err(|_| bad("marker count", value))?,
            "min-count" => self.min_count = value.parse().map_err(|_| bad("min count", value))?,
            "remove-stopwords" => self.remove_stopwords = parse_bool(value)?,
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "dim" => self.dim = value.parse().map_err(|_| bad("dimension", value))?,
            "window" => self.window = value.parse().map_err(|_| bad("window", value))?,
            "epochs" => self.epochs = value.parse().map_err(|_| bad("epochs", value))?,
            "axes" => {
                self.axes = value
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| PathBuf::from(p.trim()))
                    .collect()
            }
            "neutral" => self.neutral = Some(PathBuf::from(value)),
            "head" => self.head = value.parse()?,
            "max-features" => {
                self.max_features = value.parse().map_err(|_| bad("max features", value))?
            }
            "feature-weighting" => self.feature_weighting = value.parse()?,
            "weighting" => self.vector_weighting = value.parse()?,
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Load `key=value` lines (comments with `#`, blanks ignored) and
    /// apply them in order.
    pub fn apply_config_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (number, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    number + 1
                ))
            })?;
            self.apply_key(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), number + 1)))?;
        }
        Ok(())
    }
}

/// The analysis-affecting parameters embedded in every report. Paths are
/// reduced to axis/list identities so equal inputs give equal snapshots.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigSnapshot {
    pub seed: u64,
    pub metric: Metric,
    pub pair_budget: usize,
    pub wpm: f64,
    pub markers_k: usize,
    pub min_count: u64,
    pub remove_stopwords: bool,
    pub dim: usize,
    pub window: usize,
    pub epochs: usize,
    pub axes: Vec<String>,
    pub neutral_words: usize,
    pub head: Head,
    pub max_features: usize,
    pub feature_weighting: Weighting,
    pub vector_weighting: VectorWeighting,
}

/// Common report wrapper.
#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    tool_version: &'static str,
    analysis: &'static str,
    seed: u64,
    corpus_digest: &'a str,
    config: &'a ConfigSnapshot,
    payload: T,
}

/// Resolved word lists and axes for one run.
struct Resources {
    easy_words: HashSet<String>,
    stop_words: Option<HashSet<String>>,
    axes: Vec<PairSet>,
    neutral: NeutralWordSet,
}

fn load_resources(config: &RunConfig) -> Result<Resources> {
    let easy_words = match &config.easy_words {
        Some(path) => wordlists::load_word_list(path)?.into_iter().collect(),
        None => wordlists::default_easy_words(),
    };
    let stop_words = if config.remove_stopwords {
        Some(match &config.stopwords {
            Some(path) => wordlists::load_word_list(path)?.into_iter().collect(),
            None => wordlists::default_stop_words(),
        })
    } else {
        None
    };
    let axes = if config.axes.is_empty() {
        vec![
            wordlists::default_gender_pairs(),
            wordlists::default_race_pairs(),
        ]
    } else {
        config
            .axes
            .iter()
            .map(|path| {
                let name = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("axis")
                    .to_string();
                wordlists::load_pair_set(path, &name)
            })
            .collect::<Result<_>>()?
    };
    let neutral = match &config.neutral {
        Some(path) => wordlists::load_neutral_words(path)?,
        None => wordlists::default_neutral_words(),
    };
    Ok(Resources {
        easy_words,
        stop_words,
        axes,
        neutral,
    })
}

fn snapshot(config: &RunConfig, resources: &Resources) -> ConfigSnapshot {
    ConfigSnapshot {
        seed: config.seed,
        metric: config.metric,
        pair_budget: config.pair_budget,
        wpm: config.wpm,
        markers_k: config.markers_k,
        min_count: config.min_count,
        remove_stopwords: config.remove_stopwords,
        dim: config.dim,
        window: config.window,
        epochs: config.epochs,
        axes: resources.axes.iter().map(|a| a.axis_name.clone()).collect(),
        neutral_words: resources.neutral.words.len(),
        head: config.head,
        max_features: config.max_features,
        feature_weighting: config.feature_weighting,
        vector_weighting: config.vector_weighting,
    }
}

/// Cap the rayon worker count from `TEXTLAB_THREADS` (once per process).
pub fn configure_threads() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        if let Ok(value) = std::env::var("TEXTLAB_THREADS") {
            if let Ok(threads) = value.parse::<usize>() {
                if threads >= 1 {
                    // a failure means a pool already exists; keep it
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(threads)
                        .build_global();
                }
            }
        }
    });
}

fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let mut hex = String::with_capacity(64);
    for byte in hasher.finalize() {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(hex)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// FNV-1a of a label mixed into a seed (stable across runs and platforms).
fn label_seed(seed: u64, label: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &byte in seed.to_le_bytes().iter().chain(label.as_bytes()) {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A run's context: loaded corpus, digest, resolved resources.
struct RunContext<'a> {
    config: &'a RunConfig,
    corpus: Corpus,
    rejected: Vec<crate::corpus::RejectedLine>,
    digest: String,
    resources: Resources,
    snapshot: ConfigSnapshot,
}

impl<'a> RunContext<'a> {
    fn prepare(config: &'a RunConfig) -> Result<Self> {
        let resources = load_resources(config)?;
        let digest = sha256_hex(&config.corpus)?;
        let LoadOutcome { corpus, rejected } = load_corpus(&config.corpus)?;
        fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
        let snapshot = snapshot(config, &resources);
        Ok(RunContext {
            config,
            corpus,
            rejected,
            digest,
            resources,
            snapshot,
        })
    }

    fn report<T: Serialize>(&self, analysis: &'static str, payload: T) -> Report<'_, T> {
        Report {
            tool_version: TOOL_VERSION,
            analysis,
            seed: self.config.seed,
            corpus_digest: &self.digest,
            config: &self.snapshot,
            payload,
        }
    }

    fn out(&self, name: &str) -> PathBuf {
        self.config.out.join(name)
    }
}

// ---------- individual analyses ----------

#[derive(Serialize)]
struct ValidatePayload<'a> {
    records: usize,
    rejected: &'a [crate::corpus::RejectedLine],
    authors: Vec<String>,
    prompts: usize,
    records_per_author: BTreeMap<String, usize>,
}

fn run_validate(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let records_per_author = ctx
        .corpus
        .authors()
        .map(|a| (a.to_string(), ctx.corpus.author_records(a).len()))
        .collect::<BTreeMap<_, _>>();
    let payload = ValidatePayload {
        records: ctx.corpus.len(),
        rejected: &ctx.rejected,
        authors: ctx.corpus.authors().map(str::to_string).collect(),
        prompts: ctx.corpus.prompt_count(),
        records_per_author,
    };
    println!(
        "corpus ok: {} records, {} authors, {} prompts, {} rejected lines",
        ctx.corpus.len(),
        ctx.corpus.author_count(),
        ctx.corpus.prompt_count(),
        ctx.rejected.len()
    );
    let path = ctx.out("validation.json");
    write_json(&path, &ctx.report("validate", payload))?;
    Ok(vec![path])
}

#[derive(Serialize)]
struct SimilarityPayload {
    metric: Metric,
    inner: BTreeMap<String, crate::similarity::DistributionSummary>,
    no_pairs: Vec<String>,
    matrix: serde_json::Value,
}

fn run_similarity(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let opts = SimilarityOptions {
        metric: ctx.config.metric,
        pair_budget: ctx.config.pair_budget,
        seed: ctx.config.seed.wrapping_add(SIMILARITY_SEED_OFFSET),
    };
    let mut inner = BTreeMap::new();
    let mut no_pairs = Vec::new();
    for author in ctx.corpus.authors().map(str::to_string).collect::<Vec<_>>() {
        match inner_similarity(&ctx.corpus, &author, &opts) {
            Ok(summary) => {
                inner.insert(author, summary);
            }
            Err(Error::NoPairs { .. }) => no_pairs.push(author),
            Err(e) => return Err(e),
        }
    }
    let matrix = inter_similarity(&ctx.corpus, &opts)?;

    let mut outputs = Vec::new();
    let csv_path = ctx.out("similarity_matrix.csv");
    fs::write(&csv_path, matrix.mean_csv()).map_err(|e| Error::io(&csv_path, e))?;
    outputs.push(csv_path);

    if ctx.config.dump_pairs {
        let path = ctx.out("similarity_pairs.csv");
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record([
            "prompt_id",
            "author_a",
            "author_b",
            "record_a",
            "record_b",
            "cosine",
            "edit_similarity",
        ])?;
        for pair in pair_scores(&ctx.corpus, &opts)? {
            writer.write_record([
                pair.prompt_id.as_str(),
                pair.author_a.as_str(),
                pair.author_b.as_str(),
                pair.record_a.as_str(),
                pair.record_b.as_str(),
                &format!("{:.6}", pair.cosine),
                &format!("{:.6}", pair.edit_similarity),
            ])?;
        }
        writer.flush().map_err(|e| Error::io(&path, e))?;
        outputs.push(path);
    }

    let payload = SimilarityPayload {
        metric: ctx.config.metric,
        inner,
        no_pairs,
        matrix: matrix.to_json_value(),
    };
    let path = ctx.out("similarity.json");
    write_json(&path, &ctx.report("similarity", payload))?;
    outputs.push(path);
    Ok(outputs)
}

#[derive(Serialize)]
struct AuthorStylometry {
    readability: crate::stylometry::AuthorReadability,
    measures: crate::stylometry::CorpusMeasures,
}

fn run_stylometry(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let mut per_author = BTreeMap::new();
    for author in ctx.corpus.authors().map(str::to_string).collect::<Vec<_>>() {
        let readability = author_readability(
            &ctx.corpus,
            &author,
            &ctx.resources.easy_words,
            ctx.config.wpm,
        )?;
        let measures = corpus_measures(&ctx.corpus, &author)?;
        per_author.insert(
            author,
            AuthorStylometry {
                readability,
                measures,
            },
        );
    }

    let csv_path = ctx.out("stylometry.csv");
    let mut writer = csv::Writer::from_path(&csv_path)?;
    writer.write_record([
        "author",
        "documents",
        "difficult_words_mean",
        "difficult_words_sd",
        "flesch_mean",
        "flesch_sd",
        "reading_time_s_mean",
        "reading_time_s_sd",
        "grade_mean",
        "grade_sd",
        "monosyllables_mean",
        "monosyllables_sd",
        "polysyllables_mean",
        "polysyllables_sd",
        "unique_word_ratio",
        "entropy_bits",
        "monosyllable_ratio",
        "polysyllable_ratio",
        "lexical_diversity",
    ])?;
    for (author, stats) in &per_author {
        let r = &stats.readability;
        let m = &stats.measures;
        writer.write_record([
            author.as_str(),
            &r.documents.to_string(),
            &format!("{:.6}", r.difficult_words.mean),
            &format!("{:.6}", r.difficult_words.sd),
            &format!("{:.6}", r.flesch_reading_ease.mean),
            &format!("{:.6}", r.flesch_reading_ease.sd),
            &format!("{:.6}", r.reading_time_s.mean),
            &format!("{:.6}", r.reading_time_s.sd),
            &format!("{:.6}", r.text_standard_grade.mean),
            &format!("{:.6}", r.text_standard_grade.sd),
            &format!("{:.6}", r.monosyllable_count.mean),
            &format!("{:.6}", r.monosyllable_count.sd),
            &format!("{:.6}", r.polysyllable_count.mean),
            &format!("{:.6}", r.polysyllable_count.sd),
            &format!("{:.6}", m.unique_word_ratio),
            &format!("{:.6}", m.entropy_bits),
            &format!("{:.6}", m.monosyllable_ratio),
            &format!("{:.6}", m.polysyllable_ratio),
            &format!("{:.6}", m.lexical_diversity),
        ])?;
    }
    writer.flush().map_err(|e| Error::io(&csv_path, e))?;

    let path = ctx.out("stylometry.json");
    write_json(&path, &ctx.report("stylometry", per_author))?;
    Ok(vec![csv_path, path])
}

#[derive(Serialize)]
struct AuthorMarkers {
    markers: Vec<crate::markers::Marker>,
    wordcloud: Vec<crate::markers::WeightedWord>,
}

fn run_markers(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let table = compute_pmi_filtered(
        &ctx.corpus,
        ctx.config.min_count,
        ctx.resources.stop_words.as_ref(),
    )?;
    let mut per_author = BTreeMap::new();
    for author in ctx.corpus.authors().map(str::to_string).collect::<Vec<_>>() {
        per_author.insert(
            author.clone(),
            AuthorMarkers {
                markers: top_markers(&table, &author, ctx.config.markers_k)?,
                wordcloud: export_wordcloud(&table, &author, ctx.config.markers_k)?,
            },
        );
    }

    let csv_path = ctx.out("markers.csv");
    let mut writer = csv::Writer::from_path(&csv_path)?;
    writer.write_record(["word", "author", "pmi", "joint_count"])?;
    for (author, entry) in &per_author {
        for marker in &entry.markers {
            writer.write_record([
                marker.word.as_str(),
                author.as_str(),
                &format!("{:.6}", marker.pmi),
                &marker.joint_count.to_string(),
            ])?;
        }
    }
    writer.flush().map_err(|e| Error::io(&csv_path, e))?;

    let path = ctx.out("markers.json");
    write_json(&path, &ctx.report("markers", per_author))?;
    Ok(vec![csv_path, path])
}

#[derive(Serialize)]
struct EmbedEntry {
    file: String,
    vocab_size: usize,
    dim: usize,
    documents: usize,
}

fn embeddings_dir(out: &Path) -> PathBuf {
    out.join("embeddings")
}

fn run_embed(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let dir = embeddings_dir(&ctx.config.out);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut index: BTreeMap<String, EmbedEntry> = BTreeMap::new();
    let mut outputs = Vec::new();
    for author in ctx.corpus.authors().map(str::to_string).collect::<Vec<_>>() {
        let docs: Vec<Vec<String>> = ctx
            .corpus
            .author_records(&author)
            .iter()
            .map(|&pos| tokenize(&ctx.corpus.record(pos).text).map(|d| d.tokens))
            .collect::<Result<_>>()?;
        let config = TrainConfig {
            dim: ctx.config.dim,
            window: ctx.config.window,
            epochs: ctx.config.epochs,
            seed: label_seed(ctx.config.seed.wrapping_add(EMBED_SEED_OFFSET), &author),
            ..TrainConfig::default()
        };
        let model = train_cbow(&docs, &config)?;
        let file = format!("{}.vec", sanitize_label(&author));
        let path = dir.join(&file);
        save_embeddings(&model, &path)?;
        index.insert(
            author,
            EmbedEntry {
                file,
                vocab_size: model.vocab_size(),
                dim: model.dim(),
                documents: docs.len(),
            },
        );
        outputs.push(path);
    }
    let index_path = dir.join("index.json");
    write_json(&index_path, &index)?;
    outputs.push(index_path);

    let path = ctx.out("embed.json");
    write_json(&path, &ctx.report("embed", &index))?;
    outputs.push(path);
    Ok(outputs)
}

/// Load the per-author models written by a previous `embed` run.
fn load_trained_models(out: &Path) -> Result<Vec<(String, EmbeddingModel)>> {
    let dir = embeddings_dir(out);
    let index_path = dir.join("index.json");
    if !index_path.exists() {
        return Err(Error::MissingDependency(format!(
            "no embeddings at {} (run `embed` first, or use `all`)",
            dir.display()
        )));
    }
    let text = fs::read_to_string(&index_path).map_err(|e| Error::io(&index_path, e))?;
    let index: BTreeMap<String, serde_json::Value> = serde_json::from_str(&text)?;
    let mut models = Vec::new();
    for (author, entry) in index {
        let file = entry.get("file").and_then(|f| f.as_str()).ok_or_else(|| {
            Error::Format(format!("embedding index entry for {author:?} has no file"))
        })?;
        models.push((author, crate::embedding::load_embeddings(dir.join(file))?));
    }
    Ok(models)
}

#[derive(Serialize)]
struct AxisOutcome {
    used_pairs: usize,
    skipped_pairs: Vec<(String, String)>,
    direct_bias: f64,
    coverage: f64,
    word_scores: Vec<(String, f64)>,
}

#[derive(Serialize)]
struct BiasPayload {
    axes: Vec<String>,
    /// model -> axis -> outcome; models whose axis collapsed carry an
    /// error string instead.
    models: BTreeMap<String, BTreeMap<String, serde_json::Value>>,
    scatter: Option<crate::bias::AssociationScatter>,
}

fn run_bias(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let models = load_trained_models(&ctx.config.out)?;
    let axes = &ctx.resources.axes;
    let neutral = &ctx.resources.neutral;

    let mut per_model: BTreeMap<String, BTreeMap<String, serde_json::Value>> = BTreeMap::new();
    let mut reports: BTreeMap<(String, String), BiasReport> = BTreeMap::new();
    for (label, model) in &models {
        let mut per_axis = BTreeMap::new();
        for pairs in axes {
            let outcome = bias_direction(model, pairs)
                .and_then(|axis| direct_bias(model, neutral, &axis).map(|r| (axis, r)));
            let value = match outcome {
                Ok((axis, report)) => {
                    reports.insert((label.clone(), pairs.axis_name.clone()), report.clone());
                    serde_json::to_value(AxisOutcome {
                        used_pairs: axis.used_pairs.len(),
                        skipped_pairs: axis.skipped_pairs,
                        direct_bias: report.direct_bias,
                        coverage: report.coverage,
                        word_scores: report.word_scores,
                    })?
                }
                Err(e) => serde_json::json!({ "error": e.to_string() }),
            };
            per_axis.insert(pairs.axis_name.clone(), value);
        }
        per_model.insert(label.clone(), per_axis);
    }

    let scatter = if axes.len() >= 2 {
        let refs: Vec<(String, &EmbeddingModel)> =
            models.iter().map(|(l, m)| (l.clone(), m)).collect();
        Some(association_scatter(&refs, neutral, &axes[0], &axes[1])?)
    } else {
        None
    };

    let mut outputs = Vec::new();
    // per-word scores, one row per (model, word), one column per axis
    let csv_path = ctx.out("bias_words.csv");
    {
        let mut writer = csv::Writer::from_path(&csv_path)?;
        let mut header = vec!["model".to_string(), "word".to_string()];
        header.extend(axes.iter().map(|a| format!("b_{}", a.axis_name)));
        writer.write_record(&header)?;
        for (label, _) in &models {
            for word in &neutral.words {
                let mut row = vec![label.clone(), word.clone()];
                let mut any = false;
                for pairs in axes {
                    let score = reports
                        .get(&(label.clone(), pairs.axis_name.clone()))
                        .and_then(|r| {
                            r.word_scores
                                .iter()
                                .find(|(w, _)| w == word)
                                .map(|&(_, b)| b)
                        });
                    match score {
                        Some(b) => {
                            any = true;
                            row.push(format!("{b:.6}"));
                        }
                        None => row.push(String::new()),
                    }
                }
                if any {
                    writer.write_record(&row)?;
                }
            }
        }
        writer.flush().map_err(|e| Error::io(&csv_path, e))?;
    }
    outputs.push(csv_path);

    if let Some(scatter) = &scatter {
        let csv_path = ctx.out("bias_scatter.csv");
        let mut writer = csv::Writer::from_path(&csv_path)?;
        writer.write_record([
            "model",
            &format!("mean_b_{}", scatter.first_axis_name),
            &format!("mean_b_{}", scatter.second_axis_name),
        ])?;
        for point in &scatter.model_points {
            writer.write_record([
                point.label.as_str(),
                &format!("{:.6}", point.first_axis),
                &format!("{:.6}", point.second_axis),
            ])?;
        }
        writer.flush().map_err(|e| Error::io(&csv_path, e))?;
        outputs.push(csv_path);
    }

    let payload = BiasPayload {
        axes: axes.iter().map(|a| a.axis_name.clone()).collect(),
        models: per_model,
        scatter,
    };
    let path = ctx.out("bias.json");
    write_json(&path, &ctx.report("bias", payload))?;
    outputs.push(path);
    Ok(outputs)
}

#[derive(Serialize)]
struct ClassifyPayload {
    fold_sizes: (usize, usize, usize),
    vocab_size: usize,
    head: Head,
    validation: crate::attribution::EvalReport,
    test: crate::attribution::EvalReport,
}

fn run_classify(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let options = AttributionOptions {
        max_features: ctx.config.max_features,
        weighting: ctx.config.feature_weighting,
        classifier: ClassifierOptions {
            head: ctx.config.head,
            ..ClassifierOptions::default()
        },
        seed: ctx.config.seed.wrapping_add(CLASSIFY_SEED_OFFSET),
        ..AttributionOptions::default()
    };
    let run = run_attribution(&ctx.corpus, &options)?;

    let csv_path = ctx.out("confusion.csv");
    {
        let mut writer = csv::Writer::from_path(&csv_path)?;
        let mut header = vec!["true\\predicted".to_string()];
        header.extend(run.model.classes.iter().cloned());
        writer.write_record(&header)?;
        for (class, row) in run.model.classes.iter().zip(&run.test.confusion) {
            let mut record = vec![class.clone()];
            record.extend(row.iter().map(|c| c.to_string()));
            writer.write_record(&record)?;
        }
        writer.flush().map_err(|e| Error::io(&csv_path, e))?;
    }

    let model_path = ctx.out("model.json");
    save_model(&run.featurizer, &run.model, &model_path)?;

    let payload = ClassifyPayload {
        fold_sizes: run.fold_sizes,
        vocab_size: run.featurizer.vocab_size(),
        head: ctx.config.head,
        validation: run.validation,
        test: run.test,
    };
    let path = ctx.out("classification.json");
    write_json(&path, &ctx.report("classify", payload))?;
    Ok(vec![csv_path, model_path, path])
}

fn run_vectors(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let rows = export_doc_vectors(&ctx.corpus, ctx.config.vector_weighting, None)?;
    let jsonl_path = ctx.out("doc_vectors.jsonl");
    {
        let file = File::create(&jsonl_path).map_err(|e| Error::io(&jsonl_path, e))?;
        let mut writer = BufWriter::new(file);
        for row in &rows {
            serde_json::to_writer(&mut writer, row)?;
            writer
                .write_all(b"\n")
                .map_err(|e| Error::io(&jsonl_path, e))?;
        }
        writer.flush().map_err(|e| Error::io(&jsonl_path, e))?;
    }
    let payload = serde_json::json!({
        "weighting": ctx.config.vector_weighting,
        "rows": rows.len(),
        "file": "doc_vectors.jsonl",
    });
    let path = ctx.out("vectors.json");
    write_json(&path, &ctx.report("vectors", payload))?;
    Ok(vec![jsonl_path, path])
}

// ---------- entry point ----------

#[derive(Serialize)]
struct ManifestEntry {
    analysis: &'static str,
    seconds: f64,
    outputs: Vec<String>,
}

/// Run one analysis (or `all`, in dependency order: embeddings are
/// trained before the bias audit consumes them). Reports land under the
/// configured output directory; `run_manifest.json` records timings.
pub fn run(analysis: Analysis, config: &RunConfig) -> Result<()> {
    configure_threads();
    if config.corpus.as_os_str().is_empty() {
        return Err(Error::Config(
            "no corpus given (use --corpus or set corpus= in a config file)".into(),
        ));
    }
    let ctx = RunContext::prepare(config)?;
    let steps: Vec<Analysis> = match analysis {
        Analysis::All => vec![
            Analysis::Validate,
            Analysis::Similarity,
            Analysis::Stylometry,
            Analysis::Markers,
            Analysis::Vectors,
            Analysis::Embed,
            Analysis::Bias,
            Analysis::Classify,
        ],
        single => vec![single],
    };
    let mut manifest = Vec::new();
    for step in steps {
        let started = Instant::now();
        let outputs = match step {
            Analysis::Validate => run_validate(&ctx)?,
            Analysis::Similarity => run_similarity(&ctx)?,
            Analysis::Stylometry => run_stylometry(&ctx)?,
            Analysis::Markers => run_markers(&ctx)?,
            Analysis::Embed => run_embed(&ctx)?,
            Analysis::Bias => run_bias(&ctx)?,
            Analysis::Classify => run_classify(&ctx)?,
            Analysis::Vectors => run_vectors(&ctx)?,
            Analysis::All => unreachable!("expanded above"),
        };
        manifest.push(ManifestEntry {
            analysis: step.name(),
            seconds: started.elapsed().as_secs_f64(),
            outputs: outputs
                .iter()
                .map(|p| {
                    p.strip_prefix(&config.out)
                        .unwrap_or(p)
                        .to_string_lossy()
                        .into_owned()
                })
                .collect(),
        });
    }
    write_json(&config.out.join("run_manifest.json"), &manifest)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{save_corpus, TextRecord};

    fn fixture_corpus() -> Corpus {
        let mut records = Vec::new();
        let authors = ["ada", "bob", "human"];
        for (ai, author) in authors.iter().enumerate() {
            for prompt in 0..2 {
                for copy in 0..6 {
                    let text = format!(
                        "He said the {author} report number {copy} was ready. \
                         She wrote a nurse and a doctor met the teacher on prompt {prompt}."
                    );
                    records.push(TextRecord {
                        id: format!("r-{ai}-{prompt}-{copy}"),
                        prompt_id: format!("p{prompt}"),
                        author: author.to_string(),
                        text,
                    });
                }
            }
        }
        Corpus::from_records(records).unwrap()
    }

    fn write_fixture(dir: &Path) -> PathBuf {
        let path = dir.join("corpus.jsonl");
        save_corpus(&fixture_corpus(), &path).unwrap();
        path
    }

    #[test]
    fn config_file_and_key_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(
            &path,
            "# run settings\nseed=9\nmetric=edit\npair-budget=123\nhead=logreg\n",
        )
        .unwrap();
        let mut config = RunConfig::default();
        config.apply_config_file(&path).unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.metric, Metric::Edit);
        assert_eq!(config.pair_budget, 123);
        assert_eq!(config.head, Head::Logreg);

        // later application wins (flag-over-file semantics)
        config.apply_key("seed", "11").unwrap();
        assert_eq!(config.seed, 11);

        assert!(config.apply_key("nope", "1").is_err());
        assert!(config.apply_key("seed", "abc").is_err());
        assert!(config.apply_key("wpm", "-3").is_err());

        let bad = dir.path().join("bad.conf");
        std::fs::write(&bad, "seed 9\n").unwrap();
        let mut config = RunConfig::default();
        assert!(matches!(
            config.apply_config_file(&bad),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn bias_without_embeddings_is_a_dependency_error() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = write_fixture(dir.path());
        let config = RunConfig {
            corpus,
            out: dir.path().join("out"),
            ..RunConfig::default()
        };
        let err = run(Analysis::Bias, &config).unwrap_err();
        assert!(matches!(err, Error::MissingDependency(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn single_analyses_write_their_reports() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = write_fixture(dir.path());
        let out = dir.path().join("out");
        let config = RunConfig {
            corpus,
            out: out.clone(),
            epochs: 1,
            dim: 8,
            min_count: 1,
            ..RunConfig::default()
        };
        run(Analysis::Validate, &config).unwrap();
        assert!(out.join("validation.json").exists());
        run(Analysis::Similarity, &config).unwrap();
        assert!(out.join("similarity.json").exists());
        assert!(out.join("similarity_matrix.csv").exists());
        run(Analysis::Stylometry, &config).unwrap();
        assert!(out.join("stylometry.csv").exists());
        run(Analysis::Markers, &config).unwrap();
        assert!(out.join("markers.json").exists());
        run(Analysis::Vectors, &config).unwrap();
        assert!(out.join("doc_vectors.jsonl").exists());
        run(Analysis::Embed, &config).unwrap();
        assert!(out.join("embeddings/index.json").exists());
        run(Analysis::Bias, &config).unwrap();
        assert!(out.join("bias.json").exists());
        run(Analysis::Classify, &config).unwrap();
        assert!(out.join("classification.json").exists());
        assert!(out.join("run_manifest.json").exists());
    }

    #[test]
    fn all_is_deterministic_across_reruns() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = write_fixture(dir.path());
        let mut payloads: Vec<BTreeMap<String, Vec<u8>>> = Vec::new();
        for name in ["one", "two"] {
            let out = dir.path().join(name);
            let config = RunConfig {
                corpus: corpus.clone(),
                out: out.clone(),
                epochs: 1,
                dim: 8,
                min_count: 1,
                ..RunConfig::default()
            };
            run(Analysis::All, &config).unwrap();
            let mut files = BTreeMap::new();
            collect_files(&out, &out, &mut files);
            files.remove("run_manifest.json");
            payloads.push(files);
        }
        assert_eq!(payloads[0].len(), payloads[1].len());
        for (name, bytes) in &payloads[0] {
            assert_eq!(
                Some(bytes),
                payloads[1].get(name),
                "{name} differs between reruns"
            );
        }
    }

    fn collect_files(root: &Path, dir: &Path, into: &mut BTreeMap<String, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                collect_files(root, &path, into);
            } else {
                let name = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                into.insert(name, fs::read(&path).unwrap());
            }
        }
    }

    #[test]
    fn corpus_file_is_never_mutated() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = write_fixture(dir.path());
        let before = fs::read(&corpus).unwrap();
        let config = RunConfig {
            corpus: corpus.clone(),
            out: dir.path().join("out"),
            epochs: 1,
            dim: 4,
            min_count: 1,
            ..RunConfig::default()
        };
        run(Analysis::All, &config).unwrap();
        assert_eq!(before, fs::read(&corpus).unwrap());
    }
}
