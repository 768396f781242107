//! Bag-of-words authorship attribution with a stratified
//! train/validation/test protocol.
//!
//! The feature space is a train-fitted vocabulary (top words by train
//! frequency); classes are authors. Two heads are available: multinomial
//! naive Bayes with Laplace smoothing (default) and one-vs-rest logistic
//! regression trained by seeded gradient descent. Splits are stratified
//! per author with largest-remainder rounding, so fold sizes are within
//! one record of the exact fractions for every class.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, Corpus};
use crate::error::{Error, Result};

/// Sparse feature vector: (column, weight), sorted by column.
pub type SparseVec = Vec<(usize, f64)>;

/// Stratified fold fractions.
pub const DEFAULT_FRACTIONS: (f64, f64, f64) = (0.6, 0.2, 0.2);

/// Smallest per-class record count that still yields a sensible split.
const MIN_CLASS_RECORDS: usize = 5;

/// Feature weighting scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Raw term counts.
    Tf,
    /// Presence indicator.
    Binary,
    /// Count times `ln(1 + N/df)` with train-set document frequencies.
    TfIdf,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(Weighting::Tf),
            "binary" => Ok(Weighting::Binary),
            "tfidf" => Ok(Weighting::TfIdf),
            other => Err(Error::Config(format!(
                "unknown weighting {other:?} (expected tf, binary or tfidf)"
            ))),
        }
    }
}

/// Classifier head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Head {
    Nb,
    Logreg,
}

impl std::str::FromStr for Head {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nb" => Ok(Head::Nb),
            "logreg" => Ok(Head::Logreg),
            other => Err(Error::Config(format!(
                "unknown classifier head {other:?} (expected nb or logreg)"
            ))),
        }
    }
}

/// Knobs for [`train_classifier`].
#[derive(Debug, Clone)]
pub struct ClassifierOptions {
    pub head: Head,
    /// Laplace smoothing for the naive Bayes head; 0 gives the raw MLE.
    pub alpha: f64,
    pub seed: u64,
    /// Logistic-regression settings.
    pub learning_rate: f64,
    pub epochs: usize,
    /// 0 means full-batch updates.
    pub batch_size: usize,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        ClassifierOptions {
            head: Head::Nb,
            alpha: 1.0,
            seed: 0,
            learning_rate: 0.1,
            epochs: 50,
            batch_size: 0,
        }
    }
}

// ---------- stratified split ----------

/// FNV-1a over the class name mixed with the run seed.
fn class_seed(seed: u64, class: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &byte in seed.to_le_bytes().iter().chain(class.as_bytes()) {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Largest-remainder allocation of `n` into three fractions; leftover
/// units go to the largest remainders, ties resolved in fold order.
fn allocate(n: usize, fractions: (f64, f64, f64)) -> [usize; 3] {
    let targets = [
        n as f64 * fractions.0,
        n as f64 * fractions.1,
        n as f64 * fractions.2,
    ];
    let mut sizes = [0usize; 3];
    let mut remainders = [(0.0f64, 0usize); 3];
    for i in 0..3 {
        sizes[i] = targets[i].floor() as usize;
        remainders[i] = (targets[i] - targets[i].floor(), i);
    }
    let mut leftover = n - sizes.iter().sum::<usize>();
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for &(_, fold) in &remainders {
        if leftover == 0 {
            break;
        }
        sizes[fold] += 1;
        leftover -= 1;
    }
    sizes
}

/// Stratified train/validation/test split: per class, records are
/// shuffled by a class-derived seed and allocated by largest remainder.
/// Returns corpus positions per fold. Independent of record order.
pub fn split(
    corpus: &Corpus,
    fractions: (f64, f64, f64),
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let total = fractions.0 + fractions.1 + fractions.2;
    if (total - 1.0).abs() > 1e-9 || fractions.0 <= 0.0 || fractions.1 < 0.0 || fractions.2 < 0.0 {
        return Err(Error::Config(format!(
            "split fractions must be positive and sum to 1, got {fractions:?}"
        )));
    }
    let mut train = Vec::new();
    let mut val = Vec::new();
    let mut test = Vec::new();
    for author in corpus.authors().map(str::to_string).collect::<Vec<_>>() {
        // canonical id order, then a class-seeded shuffle
        let mut positions = corpus.author_records(&author);
        if positions.len() < MIN_CLASS_RECORDS {
            return Err(Error::Stratification(format!(
                "author {author:?} has {} records, need at least {MIN_CLASS_RECORDS}",
                positions.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(class_seed(seed, &author));
        positions.shuffle(&mut rng);
        let sizes = allocate(positions.len(), fractions);
        train.extend(&positions[..sizes[0]]);
        val.extend(&positions[sizes[0]..sizes[0] + sizes[1]]);
        test.extend(&positions[sizes[0] + sizes[1]..]);
    }
    train.sort_unstable();
    val.sort_unstable();
    test.sort_unstable();
    Ok((train, val, test))
}

// ---------- featurizer ----------

/// Train-fitted bag-of-words vocabulary with document frequencies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BowFeaturizer {
    /// Column order: train frequency descending, ties lexicographic.
    vocab: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    doc_freq: Vec<u64>,
    n_docs: u64,
    weighting: Weighting,
}

impl BowFeaturizer {
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    fn rebuild_index(&mut self) {
        self.index = self
            .vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
    }

    /// Map tokens to a sparse weighted vector; words outside the train
    /// vocabulary are dropped.
    pub fn transform(&self, tokens: &[String]) -> SparseVec {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for token in tokens {
            if let Some(&col) = self.index.get(token) {
                *counts.entry(col).or_insert(0.0) += 1.0;
            }
        }
        counts
            .into_iter()
            .map(|(col, count)| {
                let weight = match self.weighting {
                    Weighting::Tf => count,
                    Weighting::Binary => 1.0,
                    Weighting::TfIdf => {
                        count * (1.0 + self.n_docs as f64 / self.doc_freq[col] as f64).ln()
                    }
                };
                (col, weight)
            })
            .collect()
    }
}

/// Fit the vocabulary on the train fold only: top `max_features` words by
/// train frequency, ties lexicographic.
pub fn fit_featurizer(
    corpus: &Corpus,
    train_positions: &[usize],
    max_features: usize,
    weighting: Weighting,
) -> Result<BowFeaturizer> {
    if train_positions.is_empty() {
        return Err(Error::Stratification("empty train fold".to_string()));
    }
    if max_features == 0 {
        return Err(Error::Config("max_features must be positive".to_string()));
    }
    let docs: Vec<Vec<String>> = train_positions
        .par_iter()
        .map(|&pos| tokenize(&corpus.record(pos).text).map(|d| d.tokens))
        .collect::<Result<_>>()?;
    let mut freq: HashMap<&str, u64> = HashMap::new();
    let mut df: HashMap<&str, u64> = HashMap::new();
    for doc in &docs {
        let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
        for token in doc {
            *freq.entry(token).or_insert(0) += 1;
            seen.entry(token).or_insert(());
        }
        for (token, ()) in seen {
            *df.entry(token).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(&str, u64)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.truncate(max_features);
    let vocab: Vec<String> = ranked.iter().map(|(w, _)| w.to_string()).collect();
    let doc_freq: Vec<u64> = ranked.iter().map(|&(w, _)| df[w]).collect();
    let mut featurizer = BowFeaturizer {
        vocab,
        index: HashMap::new(),
        doc_freq,
        n_docs: docs.len() as u64,
        weighting,
    };
    featurizer.rebuild_index();
    Ok(featurizer)
}

/// Tokenize and transform a set of corpus positions, returning features
/// and their author labels.
pub fn featurize(
    corpus: &Corpus,
    positions: &[usize],
    featurizer: &BowFeaturizer,
) -> Result<(Vec<SparseVec>, Vec<String>)> {
    let features: Vec<SparseVec> = positions
        .par_iter()
        .map(|&pos| tokenize(&corpus.record(pos).text).map(|d| featurizer.transform(&d.tokens)))
        .collect::<Result<_>>()?;
    let labels = positions
        .iter()
        .map(|&pos| corpus.record(pos).author.clone())
        .collect();
    Ok((features, labels))
}

// ---------- classifier ----------

/// Head-specific parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HeadParams {
    Nb {
        /// Per class: log-likelihood per column; exp rows sum to 1.
        log_likelihoods: Vec<Vec<f64>>,
    },
    Logreg {
        /// Per class: one weight per column plus a trailing bias term.
        weights: Vec<Vec<f64>>,
    },
}

/// A trained attribution model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributionModel {
    /// Sorted author list; ties in prediction resolve to the earliest.
    pub classes: Vec<String>,
    pub log_priors: Vec<f64>,
    pub params: HeadParams,
    pub alpha: f64,
    pub vocab_size: usize,
    /// Mean training loss per epoch (logistic head only).
    pub training_loss: Vec<f64>,
}

/// A single prediction with normalized per-class scores.
#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub author: String,
    /// (class, score), in class order; scores sum to 1.
    pub scores: Vec<(String, f64)>,
    /// True when the feature vector had no informative columns and the
    /// prediction fell back to the prior.
    pub used_prior_fallback: bool,
}

fn sparse_dot(features: &SparseVec, dense: &[f64]) -> f64 {
    features.iter().map(|&(col, w)| w * dense[col]).sum()
}

/// Train the selected head. Classes are the sorted distinct labels.
pub fn train_classifier(
    features: &[SparseVec],
    labels: &[String],
    vocab_size: usize,
    options: &ClassifierOptions,
) -> Result<AttributionModel> {
    if features.len() != labels.len() {
        return Err(Error::Config(format!(
            "{} feature rows but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if options.alpha < 0.0 || !options.alpha.is_finite() {
        return Err(Error::Config(format!(
            "smoothing must be non-negative, got {}",
            options.alpha
        )));
    }
    let mut classes: Vec<String> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleAuthor);
    }
    let class_index: HashMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let y: Vec<usize> = labels.iter().map(|l| class_index[l.as_str()]).collect();

    let n = features.len() as f64;
    let mut class_counts = vec![0usize; classes.len()];
    for &c in &y {
        class_counts[c] += 1;
    }
    let log_priors: Vec<f64> = class_counts.iter().map(|&c| (c as f64 / n).ln()).collect();

    let (params, training_loss) = match options.head {
        Head::Nb => (
            train_nb(features, &y, classes.len(), vocab_size, options.alpha)?,
            Vec::new(),
        ),
        Head::Logreg => train_logreg(features, &y, classes.len(), vocab_size, options),
    };

    Ok(AttributionModel {
        classes,
        log_priors,
        params,
        alpha: options.alpha,
        vocab_size,
        training_loss,
    })
}

fn train_nb(
    features: &[SparseVec],
    y: &[usize],
    n_classes: usize,
    vocab_size: usize,
    alpha: f64,
) -> Result<HeadParams> {
    let mut counts = vec![vec![0.0f64; vocab_size]; n_classes];
    let mut totals = vec![0.0f64; n_classes];
    for (row, &class) in features.iter().zip(y) {
        for &(col, weight) in row {
            counts[class][col] += weight;
            totals[class] += weight;
        }
    }
    let log_likelihoods = counts
        .iter()
        .zip(&totals)
        .enumerate()
        .map(|(class, (row, &total))| {
            let denom = total + alpha * vocab_size as f64;
            if denom == 0.0 {
                return Err(Error::Config(format!(
                    "class {class} has no feature mass and smoothing is 0"
                )));
            }
            Ok(row.iter().map(|&c| ((c + alpha) / denom).ln()).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(HeadParams::Nb { log_likelihoods })
}

fn train_logreg(
    features: &[SparseVec],
    y: &[usize],
    n_classes: usize,
    vocab_size: usize,
    options: &ClassifierOptions,
) -> (HeadParams, Vec<f64>) {
    use crate::embedding::sigmoid;

    let n = features.len();
    let bias = vocab_size; // trailing column
    let mut weights = vec![vec![0.0f64; vocab_size + 1]; n_classes];
    let batch = if options.batch_size == 0 {
        n
    } else {
        options.batch_size.min(n)
    };
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut loss_history = Vec::with_capacity(options.epochs);

    for _ in 0..options.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(batch) {
            let mut grads = vec![vec![0.0f64; vocab_size + 1]; n_classes];
            for &i in chunk {
                for (class, grad) in grads.iter_mut().enumerate() {
                    let margin = sparse_dot(&features[i], &weights[class]) + weights[class][bias];
                    let target = if y[i] == class { 1.0 } else { 0.0 };
                    let residual = sigmoid(margin) - target;
                    for &(col, w) in &features[i] {
                        grad[col] += residual * w;
                    }
                    grad[bias] += residual;
                }
            }
            let scale = options.learning_rate / chunk.len() as f64;
            for (w_row, g_row) in weights.iter_mut().zip(&grads) {
                for (w, g) in w_row.iter_mut().zip(g_row) {
                    *w -= scale * g;
                }
            }
        }
        // epoch-end mean one-vs-rest log loss
        let mut loss = 0.0;
        for (i, row) in features.iter().enumerate() {
            for (class, w_row) in weights.iter().enumerate() {
                let margin = sparse_dot(row, w_row) + w_row[bias];
                let target = if y[i] == class { 1.0 } else { 0.0 };
                let p = sigmoid(margin).clamp(1e-12, 1.0 - 1e-12);
                loss -= target * p.ln() + (1.0 - target) * (1.0 - p).ln();
            }
        }
        loss_history.push(loss / n as f64);
    }
    (HeadParams::Logreg { weights }, loss_history)
}

/// Predict the author of one featurized document. Scores are normalized
/// to sum to 1; ties resolve to the earliest class.
pub fn predict(model: &AttributionModel, features: &SparseVec) -> Prediction {
    let informative = !features.is_empty();
    let raw: Vec<f64> = match &model.params {
        HeadParams::Nb { log_likelihoods } => model
            .log_priors
            .iter()
            .zip(log_likelihoods)
            .map(|(&prior, row)| prior + sparse_dot(features, row))
            .collect(),
        HeadParams::Logreg { weights } => weights
            .iter()
            .map(|row| sparse_dot(features, row) + row[model.vocab_size])
            .collect(),
    };
    let scores: Vec<f64> = if informative {
        match &model.params {
            // log-space posteriors via log-sum-exp
            HeadParams::Nb { .. } => {
                let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = raw.iter().map(|&s| (s - max).exp()).collect();
                let total: f64 = exps.iter().sum();
                exps.iter().map(|&e| e / total).collect()
            }
            // independent sigmoids normalized across classes
            HeadParams::Logreg { .. } => {
                use crate::embedding::sigmoid;
                let probs: Vec<f64> = raw.iter().map(|&m| sigmoid(m)).collect();
                let total: f64 = probs.iter().sum();
                if total == 0.0 {
                    vec![1.0 / probs.len() as f64; probs.len()]
                } else {
                    probs.iter().map(|&p| p / total).collect()
                }
            }
        }
    } else {
        // no informative columns: fall back to the prior distribution
        let exps: Vec<f64> = model.log_priors.iter().map(|&p| p.exp()).collect();
        let total: f64 = exps.iter().sum();
        exps.iter().map(|&e| e / total).collect()
    };
    let best = scores
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("scores are finite"))
        .map(|(i, _)| i)
        .expect("at least two classes");
    // max_by returns the last maximum; rescan for the earliest
    let best = scores
        .iter()
        .position(|&s| s == scores[best])
        .unwrap_or(best);
    Prediction {
        author: model.classes[best].clone(),
        scores: model
            .classes
            .iter()
            .cloned()
            .zip(scores.iter().copied())
            .collect(),
        used_prior_fallback: !informative,
    }
}

// ---------- evaluation ----------

/// Per-class evaluation metrics.
#[derive(Debug, Clone, Serialize)]
pub struct ClassMetrics {
    pub class: String,
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Evaluation summary over a labeled set.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Rows: true class; columns: predicted class (both in class order).
    pub confusion: Vec<Vec<usize>>,
}

/// Metric arithmetic from a confusion matrix (rows true, columns
/// predicted). Degenerate precision/recall are 0; F1 is 0 when
/// precision + recall is 0.
pub fn metrics_from_confusion(classes: &[String], confusion: &[Vec<usize>]) -> EvalReport {
    let n = classes.len();
    let total: usize = confusion.iter().map(|row| row.iter().sum::<usize>()).sum();
    let trace: usize = (0..n).map(|i| confusion[i][i]).sum();
    let per_class = (0..n)
        .map(|i| {
            let support: usize = confusion[i].iter().sum();
            let predicted: usize = confusion.iter().map(|row| row[i]).sum();
            let tp = confusion[i][i];
            let precision = if predicted == 0 {
                0.0
            } else {
                tp as f64 / predicted as f64
            };
            let recall = if support == 0 {
                0.0
            } else {
                tp as f64 / support as f64
            };
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                class: classes[i].clone(),
                support,
                precision,
                recall,
                f1,
            }
        })
        .collect();
    EvalReport {
        accuracy: trace as f64 / total as f64,
        per_class,
        confusion: confusion.to_vec(),
    }
}

/// Predict every document and score against its label.
pub fn evaluate(
    model: &AttributionModel,
    features: &[SparseVec],
    labels: &[String],
) -> Result<EvalReport> {
    if features.is_empty() {
        return Err(Error::Stratification("empty evaluation set".to_string()));
    }
    let class_index: HashMap<&str, usize> = model
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let mut confusion = vec![vec![0usize; model.classes.len()]; model.classes.len()];
    for (row, label) in features.iter().zip(labels) {
        let &truth = class_index
            .get(label.as_str())
            .ok_or_else(|| Error::UnknownAuthor(label.clone()))?;
        let predicted = class_index[predict(model, row).author.as_str()];
        confusion[truth][predicted] += 1;
    }
    Ok(metrics_from_confusion(&model.classes, &confusion))
}

// ---------- persistence ----------

/// On-disk artifact: featurizer plus model, versioned.
#[derive(Serialize, Deserialize)]
struct SavedModel {
    version: u32,
    featurizer: BowFeaturizer,
    model: AttributionModel,
}

const MODEL_VERSION: u32 = 1;

/// Save featurizer and model as versioned JSON.
pub fn save_model(
    featurizer: &BowFeaturizer,
    model: &AttributionModel,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(
        BufWriter::new(file),
        &SavedModel {
            version: MODEL_VERSION,
            featurizer: featurizer.clone(),
            model: model.clone(),
        },
    )?;
    Ok(())
}

/// Load a model saved by [`save_model`], checking the version tag.
pub fn load_model(path: impl AsRef<Path>) -> Result<(BowFeaturizer, AttributionModel)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let saved: SavedModel = serde_json::from_reader(BufReader::new(file))?;
    if saved.version != MODEL_VERSION {
        return Err(Error::Format(format!(
            "model version {} not supported (expected {MODEL_VERSION})",
            saved.version
        )));
    }
    let mut featurizer = saved.featurizer;
    featurizer.rebuild_index();
    Ok((featurizer, saved.model))
}

// ---------- end-to-end protocol ----------

/// Settings for [`run_attribution`].
#[derive(Debug, Clone)]
pub struct AttributionOptions {
    pub fractions: (f64, f64, f64),
    pub max_features: usize,
    pub weighting: Weighting,
    pub classifier: ClassifierOptions,
    pub seed: u64,
}

impl Default for AttributionOptions {
    fn default() -> Self {
        AttributionOptions {
            fractions: DEFAULT_FRACTIONS,
            max_features: 50_000,
            weighting: Weighting::Tf,
            classifier: ClassifierOptions::default(),
            seed: 0,
        }
    }
}

/// Everything one attribution run produces.
#[derive(Debug, Clone)]
pub struct AttributionRun {
    pub featurizer: BowFeaturizer,
    pub model: AttributionModel,
    pub fold_sizes: (usize, usize, usize),
    pub validation: EvalReport,
    pub test: EvalReport,
}

/// Full protocol: stratified split, featurizer fitted on train only,
/// train the head, evaluate on validation and test.
pub fn run_attribution(corpus: &Corpus, options: &AttributionOptions) -> Result<AttributionRun> {
    let (train, val, test) = split(corpus, options.fractions, options.seed)?;
    let featurizer = fit_featurizer(corpus, &train, options.max_features, options.weighting)?;
    let (train_x, train_y) = featurize(corpus, &train, &featurizer)?;
    let classifier_options = ClassifierOptions {
        seed: options.seed,
        ..options.classifier.clone()
    };
    let model = train_classifier(
        &train_x,
        &train_y,
        featurizer.vocab_size(),
        &classifier_options,
    )?;
    let (val_x, val_y) = featurize(corpus, &val, &featurizer)?;
    let (test_x, test_y) = featurize(corpus, &test, &featurizer)?;
    Ok(AttributionRun {
        fold_sizes: (train.len(), val.len(), test.len()),
        validation: evaluate(&model, &val_x, &val_y)?,
        test: evaluate(&model, &test_x, &test_y)?,
        featurizer,
        model,
    })
}
