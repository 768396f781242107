//! CBOW word embeddings trained from scratch with negative sampling.
//!
//! The predicted representation of a position is the mean of the input
//! vectors inside a fixed symmetric window; the objective is the standard
//! sigmoid negative-sampling loss with negatives drawn from the
//! unigram^(3/4) distribution. Training is single-worker and fully
//! deterministic for a fixed seed: vocabulary order, vector
//! initialization, window enumeration, and negative draws all follow one
//! seeded generator with no dependence on map iteration order.
//!
//! The loss and its analytic gradients are exposed as pure functions over
//! raw slices ([`negative_sampling_loss`], [`negative_sampling_gradients`])
//! and the trainer applies exactly those gradients, so a finite-difference
//! check of the public functions covers the training arithmetic itself.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Training hyperparameters.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub dim: usize,
    /// Context words taken on each side of the target.
    pub window: usize,
    pub min_count: u64,
    pub epochs: usize,
    pub negative_samples: usize,
    /// Linearly decayed towards (almost) zero over all examples.
    pub initial_learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 50,
            window: 5,
            min_count: 1,
            epochs: 5,
            negative_samples: 5,
            initial_learning_rate: 0.025,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("embedding dimension must be >= 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("context window must be >= 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epoch count must be >= 1".into()));
        }
        if self.negative_samples == 0 {
            return Err(Error::Config("negative sample count must be >= 1".into()));
        }
        if self.initial_learning_rate <= 0.0 || !self.initial_learning_rate.is_finite() {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.initial_learning_rate
            )));
        }
        Ok(())
    }
}

/// A trained embedding table: vocabulary ordered by frequency (descending,
/// ties lexicographic), one input vector per word, and the output layer
/// kept for loss evaluation.
#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    words: Vec<String>,
    frequencies: Vec<u64>,
    index: HashMap<String, usize>,
    input_vectors: Vec<Vec<f64>>,
    output_vectors: Vec<Vec<f64>>,
    dim: usize,
}

impl EmbeddingModel {
    /// Build a model from fixed vectors (no training), e.g. hand-set
    /// geometry. Frequencies default to 1.
    pub fn from_vectors(entries: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Format("no vectors given".into()));
        }
        let dim = entries[0].1.len();
        if dim == 0 {
            return Err(Error::Format("zero-dimensional vectors".into()));
        }
        let mut index = HashMap::new();
        let mut words = Vec::new();
        let mut input_vectors = Vec::new();
        for (word, vector) in entries {
            if vector.len() != dim {
                return Err(Error::Format(format!(
                    "vector for {word:?} has {} components, expected {dim}",
                    vector.len()
                )));
            }
            if index.insert(word.clone(), words.len()).is_some() {
                return Err(Error::Format(format!("duplicate word {word:?}")));
            }
            words.push(word);
            input_vectors.push(vector);
        }
        let frequencies = vec![1; words.len()];
        let output_vectors = vec![vec![0.0; dim]; words.len()];
        Ok(EmbeddingModel {
            words,
            frequencies,
            index,
            input_vectors,
            output_vectors,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab_size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.index.get(word).map(|&i| self.frequencies[i])
    }

    /// The input vector row for `word`.
    pub fn vector(&self, word: &str) -> Result<&[f64]> {
        self.index
            .get(word)
            .map(|&i| self.input_vectors[i].as_slice())
            .ok_or_else(|| Error::OutOfVocabulary(word.to_string()))
    }

    /// Output-layer row for `word` (zero unless trained); exposed so the
    /// objective can be evaluated against a model.
    pub fn output_vector(&self, word: &str) -> Result<&[f64]> {
        self.index
            .get(word)
            .map(|&i| self.output_vectors[i].as_slice())
            .ok_or_else(|| Error::OutOfVocabulary(word.to_string()))
    }

    /// Cosine similarity between two vocabulary words.
    pub fn cosine(&self, a: &str, b: &str) -> Result<f64> {
        Ok(cosine(self.vector(a)?, self.vector(b)?))
    }

    /// `a : b :: c : ?` — the vocabulary word (excluding the query words)
    /// whose vector is closest by cosine to `unit(b) - unit(a) + unit(c)`.
    pub fn analogy(&self, a: &str, b: &str, c: &str) -> Result<String> {
        let target: Vec<f64> = unit(self.vector(b)?)
            .iter()
            .zip(unit(self.vector(a)?))
            .zip(unit(self.vector(c)?))
            .map(|((&vb, va), vc)| vb - va + vc)
            .collect();
        let mut best: Option<(f64, usize)> = None;
        for (i, word) in self.words.iter().enumerate() {
            if word == a || word == b || word == c {
                continue;
            }
            let score = cosine(&target, &self.input_vectors[i]);
            if best.map(|(s, _)| score > s).unwrap_or(true) {
                best = Some((score, i));
            }
        }
        best.map(|(_, i)| self.words[i].clone())
            .ok_or_else(|| Error::Format("no candidate words outside the query".into()))
    }
}

/// Cosine similarity of two dense vectors; 0.0 when either has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

fn unit(v: &[f64]) -> Vec<f64> {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / norm).collect()
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable `ln(sigmoid(x))`.
fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Negative-sampling objective for one example:
/// `-ln s(u_t . h) - sum_n ln s(-u_n . h)` where `h` is the context mean,
/// `u_t` the target's output vector and `u_n` the negatives' output vectors.
pub fn negative_sampling_loss(
    context_mean: &[f64],
    target_output: &[f64],
    negative_outputs: &[&[f64]],
) -> f64 {
    let dot = |u: &[f64]| u.iter().zip(context_mean).map(|(x, y)| x * y).sum::<f64>();
    let mut loss = -log_sigmoid(dot(target_output));
    for negative in negative_outputs {
        loss -= log_sigmoid(-dot(negative));
    }
    loss
}

/// Analytic gradients of [`negative_sampling_loss`] with respect to the
/// context mean, the target output vector, and each negative output vector
/// (in that order).
pub fn negative_sampling_gradients(
    context_mean: &[f64],
    target_output: &[f64],
    negative_outputs: &[&[f64]],
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let dim = context_mean.len();
    let dot = |u: &[f64]| u.iter().zip(context_mean).map(|(x, y)| x * y).sum::<f64>();

    let mut grad_context = vec![0.0; dim];
    // d/ds of -ln s(s) is s(s) - 1; for negatives -ln s(-s) it is s(s)
    let residual_target = sigmoid(dot(target_output)) - 1.0;
    let grad_target: Vec<f64> = context_mean.iter().map(|&h| residual_target * h).collect();
    for (g, &u) in grad_context.iter_mut().zip(target_output) {
        *g += residual_target * u;
    }

    let mut grad_negatives = Vec::with_capacity(negative_outputs.len());
    for negative in negative_outputs {
        let residual = sigmoid(dot(negative));
        grad_negatives.push(context_mean.iter().map(|&h| residual * h).collect());
        for (g, &u) in grad_context.iter_mut().zip(*negative) {
            *g += residual * u;
        }
    }
    (grad_context, grad_target, grad_negatives)
}

/// Draws negative-sample word indices from the unigram^(3/4) distribution
/// via a cumulative table and binary search.
struct NegativeSampler {
    cumulative: Vec<f64>,
}

impl NegativeSampler {
    fn new(frequencies: &[u64]) -> Self {
        let mut cumulative = Vec::with_capacity(frequencies.len());
        let mut acc = 0.0;
        for &f in frequencies {
            acc += (f as f64).powf(0.75);
            cumulative.push(acc);
        }
        NegativeSampler { cumulative }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let point = rng.random_range(0.0..total);
        self.cumulative.partition_point(|&c| c <= point)
    }
}

/// Frequency-ordered vocabulary over the stream, honoring `min_count`.
fn build_vocab(docs: &[Vec<String>], min_count: u64) -> Result<(Vec<String>, Vec<u64>)> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for doc in docs {
        for token in doc {
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    let mut vocab: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .collect();
    if vocab.is_empty() {
        return Err(Error::Format(format!(
            "effective vocabulary is empty (no token reaches min_count {min_count})"
        )));
    }
    vocab.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    Ok((
        vocab.iter().map(|(w, _)| w.to_string()).collect(),
        vocab.iter().map(|&(_, c)| c).collect(),
    ))
}

/// The untrained model `train_cbow` starts from: input vectors uniform in
/// `[-0.5/dim, 0.5/dim)`, output vectors zero. Exposed so the objective
/// can be compared before and after training.
pub fn initial_model(docs: &[Vec<String>], config: &TrainConfig) -> Result<EmbeddingModel> {
    config.validate()?;
    let (words, frequencies) = build_vocab(docs, config.min_count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let half = 0.5 / config.dim as f64;
    let input_vectors: Vec<Vec<f64>> = (0..words.len())
        .map(|_| {
            (0..config.dim)
                .map(|_| rng.random_range(-half..half))
                .collect()
        })
        .collect();
    let output_vectors = vec![vec![0.0; config.dim]; words.len()];
    let index = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    Ok(EmbeddingModel {
        words,
        frequencies,
        index,
        input_vectors,
        output_vectors,
        dim: config.dim,
    })
}

/// Train CBOW embeddings over the token stream. Windows never cross
/// document boundaries; tokens below `min_count` are removed before
/// windowing. Deterministic for a fixed seed.
pub fn train_cbow(docs: &[Vec<String>], config: &TrainConfig) -> Result<EmbeddingModel> {
    let mut model = initial_model(docs, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let sampler = NegativeSampler::new(&model.frequencies);

    let sequences: Vec<Vec<usize>> = docs
        .iter()
        .map(|doc| {
            doc.iter()
                .filter_map(|token| model.index.get(token).copied())
                .collect()
        })
        .collect();
    let total_positions: u64 =
        config.epochs as u64 * sequences.iter().map(|s| s.len() as u64).sum::<u64>();
    let mut processed: u64 = 0;

    let mut context_indices: Vec<usize> = Vec::with_capacity(2 * config.window);
    let mut context_mean = vec![0.0f64; config.dim];
    for _ in 0..config.epochs {
        for sequence in &sequences {
            for (t, &target) in sequence.iter().enumerate() {
                let lr = config.initial_learning_rate
                    * (1.0 - processed as f64 / (total_positions + 1) as f64).max(1e-4);
                processed += 1;

                context_indices.clear();
                let lo = t.saturating_sub(config.window);
                let hi = (t + config.window + 1).min(sequence.len());
                for (offset, &word) in sequence[lo..hi].iter().enumerate() {
                    if lo + offset != t {
                        context_indices.push(word);
                    }
                }
                if context_indices.is_empty() {
                    continue;
                }

                context_mean.iter_mut().for_each(|x| *x = 0.0);
                for &word in &context_indices {
                    for (m, &v) in context_mean.iter_mut().zip(&model.input_vectors[word]) {
                        *m += v;
                    }
                }
                let inv = 1.0 / context_indices.len() as f64;
                context_mean.iter_mut().for_each(|x| *x *= inv);

                let mut negatives: Vec<usize> = Vec::with_capacity(config.negative_samples);
                for _ in 0..config.negative_samples {
                    let candidate = sampler.draw(&mut rng);
                    if candidate != target {
                        negatives.push(candidate);
                    }
                }

                let negative_rows: Vec<&[f64]> = negatives
                    .iter()
                    .map(|&n| model.output_vectors[n].as_slice())
                    .collect();
                let (grad_context, grad_target, grad_negatives) = negative_sampling_gradients(
                    &context_mean,
                    &model.output_vectors[target],
                    &negative_rows,
                );

                for (u, g) in model.output_vectors[target].iter_mut().zip(&grad_target) {
                    *u -= lr * g;
                }
                for (&n, grad) in negatives.iter().zip(&grad_negatives) {
                    for (u, g) in model.output_vectors[n].iter_mut().zip(grad) {
                        *u -= lr * g;
                    }
                }
                // the context mean distributes its gradient evenly
                for &word in &context_indices {
                    for (v, g) in model.input_vectors[word].iter_mut().zip(&grad_context) {
                        *v -= lr * g * inv;
                    }
                }
            }
        }
    }

    debug_assert!(model
        .input_vectors
        .iter()
        .chain(&model.output_vectors)
        .all(|row| row.iter().all(|x| x.is_finite())));
    Ok(model)
}

/// Write the model in the word2vec text format: a "V D" header line, then
/// one line per word with D space-separated components. Words containing
/// whitespace cannot be represented and are rejected.
pub fn save_embeddings(model: &EmbeddingModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    for word in &model.words {
        if word.chars().any(char::is_whitespace) {
            return Err(Error::Format(format!(
                "word {word:?} contains whitespace and cannot be written to the vector format"
            )));
        }
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);
    writeln!(writer, "{} {}", model.vocab_size(), model.dim).map_err(io_err)?;
    for (word, vector) in model.words.iter().zip(&model.input_vectors) {
        write!(writer, "{word}").map_err(io_err)?;
        for component in vector {
            write!(writer, " {component}").map_err(io_err)?;
        }
        writeln!(writer).map_err(io_err)?;
    }
    writer.flush().map_err(io_err)?;
    Ok(())
}

/// Read a model written by [`save_embeddings`]. Frequencies are not part
/// of the format; every loaded word gets frequency 1.
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| Error::io(path, e))?
        .ok_or_else(|| Error::Format("empty embedding file".into()))?;
    let mut parts = header.split_whitespace();
    let (vocab_size, dim) = match (parts.next(), parts.next(), parts.next()) {
        (Some(v), Some(d), None) => {
            let v: usize = v.parse().map_err(|_| {
                Error::Format(format!("bad vocabulary count in header: {header:?}"))
            })?;
            let d: usize = d
                .parse()
                .map_err(|_| Error::Format(format!("bad dimension in header: {header:?}")))?;
            (v, d)
        }
        _ => {
            return Err(Error::Format(format!(
                "embedding header must be \"V D\", got {header:?}"
            )))
        }
    };
    if dim == 0 {
        return Err(Error::Format("embedding dimension 0 in header".into()));
    }

    let mut entries = Vec::with_capacity(vocab_size);
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields
            .next()
            .ok_or_else(|| Error::Format(format!("line {}: empty row", lineno + 2)))?
            .to_string();
        let vector: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Format(format!("line {}: bad component {f:?}", lineno + 2)))
            })
            .collect::<Result<_>>()?;
        if vector.len() != dim {
            return Err(Error::Format(format!(
                "line {}: {} components for word {word:?}, header says {dim}",
                lineno + 2,
                vector.len()
            )));
        }
        entries.push((word, vector));
    }
    if entries.len() != vocab_size {
        return Err(Error::Format(format!(
            "header says {vocab_size} words, file has {}",
            entries.len()
        )));
    }
    EmbeddingModel::from_vectors(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(texts: &[&str]) -> Vec<Vec<String>> {
        texts
            .iter()
            .map(|t| t.split_whitespace().map(str::to_string).collect())
            .collect()
    }

    fn small_config(seed: u64) -> TrainConfig {
        TrainConfig {
            dim: 10,
            window: 2,
            epochs: 8,
            seed,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn vocab_order_and_min_count() {
        let corpus = docs(&["bb aa bb cc", "bb aa"]);
        let (words, freqs) = build_vocab(&corpus, 1).unwrap();
        assert_eq!(words, vec!["bb", "aa", "cc"]);
        assert_eq!(freqs, vec![3, 2, 1]);

        let (words, _) = build_vocab(&corpus, 2).unwrap();
        assert_eq!(words, vec!["bb", "aa"]);

        assert!(build_vocab(&corpus, 10).is_err());
    }

    #[test]
    fn repeated_sentence_vocab() {
        let corpus = docs(&["the cat sat", "the cat sat", "the cat sat"]);
        let model = train_cbow(&corpus, &small_config(1)).unwrap();
        let mut words: Vec<&str> = model.words().collect();
        words.sort_unstable();
        assert_eq!(words, vec!["cat", "sat", "the"]);
    }

    #[test]
    fn training_is_bitwise_deterministic() {
        let corpus = docs(&[
            "hot warm sun summer heat",
            "warm hot heat summer sun",
            "door lock key hinge wood",
        ]);
        let a = train_cbow(&corpus, &small_config(7)).unwrap();
        let b = train_cbow(&corpus, &small_config(7)).unwrap();
        for word in a.words() {
            assert_eq!(a.vector(word).unwrap(), b.vector(word).unwrap());
            assert_eq!(
                a.output_vector(word).unwrap(),
                b.output_vector(word).unwrap()
            );
        }
    }

    #[test]
    fn oov_lookup_fails() {
        let corpus = docs(&["one two three"]);
        let model = train_cbow(&corpus, &small_config(0)).unwrap();
        assert!(model.vector("one").is_ok());
        assert!(matches!(
            model.vector("missing"),
            Err(Error::OutOfVocabulary(_))
        ));
        assert!(matches!(
            model.analogy("one", "two", "missing"),
            Err(Error::OutOfVocabulary(_))
        ));
    }

    #[test]
    fn vectors_are_finite_on_adversarial_input() {
        // single-word corpus
        let model = train_cbow(&docs(&["solo solo solo"]), &small_config(3)).unwrap();
        assert!(model.vector("solo").unwrap().iter().all(|x| x.is_finite()));

        // one very long sentence
        let long: Vec<String> = (0..3000).map(|i| format!("w{}", i % 11)).collect();
        let model = train_cbow(&[long], &small_config(3)).unwrap();
        for word in model.words().map(str::to_string).collect::<Vec<_>>() {
            assert!(model.vector(&word).unwrap().iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // fixed small example at an asymmetric point
        let h = vec![0.3, -0.2, 0.05, 0.41];
        let target = vec![-0.1, 0.22, 0.3, -0.07];
        let neg1 = vec![0.2, 0.1, -0.33, 0.15];
        let neg2 = vec![-0.25, 0.05, 0.12, 0.3];
        let negatives: Vec<&[f64]> = vec![&neg1, &neg2];

        let (grad_h, grad_t, grad_n) = negative_sampling_gradients(&h, &target, &negatives);

        let eps = 1e-6;
        let check = |analytic: f64, numeric: f64| {
            let denom = analytic.abs().max(numeric.abs()).max(1e-12);
            assert!(
                (analytic - numeric).abs() / denom < 1e-4,
                "gradient mismatch: analytic {analytic}, numeric {numeric}"
            );
        };

        for i in 0..h.len() {
            let mut plus = h.clone();
            let mut minus = h.clone();
            plus[i] += eps;
            minus[i] -= eps;
            let numeric = (negative_sampling_loss(&plus, &target, &negatives)
                - negative_sampling_loss(&minus, &target, &negatives))
                / (2.0 * eps);
            check(grad_h[i], numeric);
        }
        for i in 0..target.len() {
            let mut plus = target.clone();
            let mut minus = target.clone();
            plus[i] += eps;
            minus[i] -= eps;
            let numeric = (negative_sampling_loss(&h, &plus, &negatives)
                - negative_sampling_loss(&h, &minus, &negatives))
                / (2.0 * eps);
            check(grad_t[i], numeric);
        }
        for (n, grad) in grad_n.iter().enumerate() {
            for i in 0..h.len() {
                let mut plus = vec![neg1.clone(), neg2.clone()];
                let mut minus = plus.clone();
                plus[n][i] += eps;
                minus[n][i] -= eps;
                let plus_refs: Vec<&[f64]> = plus.iter().map(Vec::as_slice).collect();
                let minus_refs: Vec<&[f64]> = minus.iter().map(Vec::as_slice).collect();
                let numeric = (negative_sampling_loss(&h, &target, &plus_refs)
                    - negative_sampling_loss(&h, &target, &minus_refs))
                    / (2.0 * eps);
                check(grad[i], numeric);
            }
        }
    }

    /// Probe loss: average objective over every (context, target) position
    /// with negatives drawn from a fixed side generator.
    fn probe_loss(model: &EmbeddingModel, corpus: &[Vec<String>], window: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(999);
        let vocab: Vec<String> = model.words().map(str::to_string).collect();
        let mut total = 0.0;
        let mut n = 0usize;
        for doc in corpus {
            for t in 0..doc.len() {
                let lo = t.saturating_sub(window);
                let hi = (t + window + 1).min(doc.len());
                let context: Vec<&str> = (lo..hi)
                    .filter(|&i| i != t)
                    .map(|i| doc[i].as_str())
                    .collect();
                if context.is_empty() {
                    continue;
                }
                let mut mean = vec![0.0; model.dim()];
                for word in &context {
                    for (m, &v) in mean.iter_mut().zip(model.vector(word).unwrap()) {
                        *m += v;
                    }
                }
                mean.iter_mut().for_each(|x| *x /= context.len() as f64);
                let negatives: Vec<&[f64]> = (0..5)
                    .map(|_| {
                        let w = &vocab[rng.random_range(0..vocab.len())];
                        model.output_vector(w).unwrap()
                    })
                    .collect();
                total += negative_sampling_loss(
                    &mean,
                    model.output_vector(&doc[t]).unwrap(),
                    &negatives,
                );
                n += 1;
            }
        }
        total / n as f64
    }

    #[test]
    fn training_lowers_probe_loss_on_ten_seeds() {
        let corpus = docs(&[
            "the sun is hot and warm today",
            "warm days feel hot in the sun",
            "a door has a lock and a key",
            "the key opens the door lock",
        ]);
        for seed in 0..10 {
            let config = small_config(seed);
            let before = probe_loss(&initial_model(&corpus, &config).unwrap(), &corpus, 2);
            let after = probe_loss(&train_cbow(&corpus, &config).unwrap(), &corpus, 2);
            assert!(
                after < before,
                "seed {seed}: probe loss rose from {before} to {after}"
            );
        }
    }

    #[test]
    fn planted_synonyms_end_up_close() {
        // "hot" and "warm" share all contexts; "door" lives elsewhere
        let mut texts = Vec::new();
        for i in 0..30 {
            let a = if i % 2 == 0 { "hot" } else { "warm" };
            texts.push(format!("the {a} sun made the {a} sand glow"));
            texts.push(format!("a door and a lock and a hinge number{i}"));
        }
        let corpus: Vec<Vec<String>> = texts
            .iter()
            .map(|t| t.split_whitespace().map(str::to_string).collect())
            .collect();
        let mut hits = 0;
        for seed in 0..5 {
            let model = train_cbow(&corpus, &small_config(seed)).unwrap();
            if model.cosine("hot", "warm").unwrap() > model.cosine("hot", "door").unwrap() {
                hits += 1;
            }
        }
        assert!(hits >= 4, "synonyms separated on {}/5 seeds", 5 - hits);
    }

    #[test]
    fn analogy_on_hand_vectors() {
        let model = EmbeddingModel::from_vectors(vec![
            ("aa".into(), vec![0.0, 0.1]),
            ("bb".into(), vec![1.0, 0.1]),
            ("cc".into(), vec![0.0, 1.0]),
            ("dd".into(), vec![0.9, 1.1]),
            ("ee".into(), vec![-1.0, -1.0]),
        ])
        .unwrap();
        // planted parallelogram: aa->bb as cc->dd
        assert_eq!(model.analogy("aa", "bb", "cc").unwrap(), "dd");
        // zero offset: nearest neighbor of cc excluding the query words
        assert_eq!(model.analogy("aa", "aa", "cc").unwrap(), "dd");
    }

    #[test]
    fn analogy_is_scale_invariant() {
        let base = vec![
            ("aa".to_string(), vec![0.2, 0.7, -0.1]),
            ("bb".to_string(), vec![0.9, 0.05, 0.3]),
            ("cc".to_string(), vec![-0.4, 0.6, 0.8]),
            ("dd".to_string(), vec![0.5, -0.2, 1.0]),
            ("ee".to_string(), vec![0.1, 0.9, 0.4]),
        ];
        let scaled: Vec<(String, Vec<f64>)> = base
            .iter()
            .map(|(w, v)| (w.clone(), v.iter().map(|x| x * 3.7).collect()))
            .collect();
        let m1 = EmbeddingModel::from_vectors(base).unwrap();
        let m2 = EmbeddingModel::from_vectors(scaled).unwrap();
        assert_eq!(
            m1.analogy("aa", "bb", "cc").unwrap(),
            m2.analogy("aa", "bb", "cc").unwrap()
        );
    }

    #[test]
    fn save_load_round_trip() {
        let corpus = docs(&["alpha beta gamma delta alpha beta"]);
        let model = train_cbow(&corpus, &small_config(11)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vectors.vec");
        save_embeddings(&model, &path).unwrap();
        let loaded = load_embeddings(&path).unwrap();
        assert_eq!(loaded.vocab_size(), model.vocab_size());
        assert_eq!(loaded.dim(), model.dim());
        for word in model.words() {
            let original = model.vector(word).unwrap();
            let restored = loaded.vector(word).unwrap();
            for (a, b) in original.iter().zip(restored) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn save_rejects_whitespace_words() {
        let model = EmbeddingModel::from_vectors(vec![("two words".into(), vec![1.0])]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            save_embeddings(&model, dir.path().join("bad.vec")),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn load_rejects_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, content: &str| {
            let path = dir.path().join(name);
            std::fs::write(&path, content).unwrap();
            path
        };
        // fewer rows than the header promises
        let path = write("short.vec", "2 3\nword 0.1 0.2 0.3\n");
        assert!(matches!(load_embeddings(&path), Err(Error::Format(_))));
        // arity mismatch
        let path = write("arity.vec", "1 3\nword 0.1 0.2\n");
        assert!(matches!(load_embeddings(&path), Err(Error::Format(_))));
        // malformed header
        let path = write("header.vec", "three 3\nword 0.1 0.2 0.3\n");
        assert!(matches!(load_embeddings(&path), Err(Error::Format(_))));
        // non-numeric component
        let path = write("nan.vec", "1 2\nword 0.1 oops\n");
        assert!(matches!(load_embeddings(&path), Err(Error::Format(_))));
    }

    #[test]
    fn config_validation() {
        let bad = TrainConfig {
            dim: 0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainConfig {
            initial_learning_rate: -1.0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(TrainConfig::default().validate().is_ok());
    }
}
