//! Pairwise text similarity and its aggregation.
//!
//! Two metrics are supported: cosine similarity over raw term-frequency
//! vectors, and word-level Levenshtein distance normalized by the longer
//! token sequence. Texts are only ever paired within the same prompt.
//! Inner-author aggregation pools all same-prompt pairs of one author;
//! inter-author aggregation produces an author x author matrix whose
//! diagonal holds the pooled inner-author means.
//!
//! Oversized (prompt, author-pair) cells are downsampled to a pair budget
//! with a generator seeded per cell, so results are independent of record
//! order and reproducible for a fixed seed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{tokenize, Corpus};
use crate::error::{Error, Result};

/// Which pairwise metric to aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Cosine,
    Edit,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(Metric::Cosine),
            "edit" => Ok(Metric::Edit),
            other => Err(Error::Config(format!(
                "unknown metric {other:?} (expected cosine or edit)"
            ))),
        }
    }
}

/// Knobs shared by the aggregation entry points.
#[derive(Debug, Clone)]
pub struct SimilarityOptions {
    pub metric: Metric,
    /// Maximum scored pairs per (prompt, author-pair) cell; larger cells
    /// are downsampled uniformly.
    pub pair_budget: usize,
    pub seed: u64,
}

impl Default for SimilarityOptions {
    fn default() -> Self {
        SimilarityOptions {
            metric: Metric::Cosine,
            pair_budget: 10_000,
            seed: 0,
        }
    }
}

/// Sparse term-frequency vector with a cached Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TermVector {
    counts: HashMap<String, u32>,
    norm: f64,
}

impl TermVector {
    pub fn counts(&self) -> &HashMap<String, u32> {
        &self.counts
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// Count token multiplicities into a [`TermVector`].
pub fn term_vector(tokens: &[String]) -> TermVector {
    let mut counts: HashMap<String, u32> = HashMap::new();
    for token in tokens {
        *counts.entry(token.clone()).or_insert(0) += 1;
    }
    let norm = counts
        .values()
        .map(|&c| (c as f64) * (c as f64))
        .sum::<f64>()
        .sqrt();
    TermVector { counts, norm }
}

/// Cosine similarity of two term vectors, clamped to `[0, 1]`.
pub fn cosine_similarity(a: &TermVector, b: &TermVector) -> f64 {
    if a.norm == 0.0 || b.norm == 0.0 {
        return 0.0;
    }
    // equal distributions are exactly 1; dividing by sqrt(S)*sqrt(S)
    // would round the self-similarity off of it
    if a.counts == b.counts {
        return 1.0;
    }
    let (small, large) = if a.counts.len() <= b.counts.len() {
        (a, b)
    } else {
        (b, a)
    };
    let mut dot = 0f64;
    for (token, &count) in &small.counts {
        if let Some(&other) = large.counts.get(token) {
            dot += count as f64 * other as f64;
        }
    }
    (dot / (a.norm * b.norm)).clamp(0.0, 1.0)
}

/// Levenshtein distance over token sequences (unit-cost insert, delete,
/// substitute) using one rolling row of the DP table.
pub fn word_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    // keep the row over the shorter sequence
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, item_long) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, item_short) in short.iter().enumerate() {
            let above = row[j + 1];
            let cost = if item_long == item_short { 0 } else { 1 };
            row[j + 1] = (above + 1).min(row[j] + 1).min(diag + cost);
            diag = above;
        }
    }
    row[short.len()]
}

/// Edit distance normalized to a similarity: `1 - distance / max(|a|, |b|)`.
///
/// Undefined (and an error) when both sequences are empty.
pub fn edit_similarity<T: PartialEq>(a: &[T], b: &[T]) -> Result<f64> {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return Err(Error::EmptyPair);
    }
    Ok(1.0 - word_edit_distance(a, b) as f64 / longest as f64)
}

/// Summary of a pooled score distribution.
#[derive(Debug, Clone, Serialize)]
pub struct DistributionSummary {
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub n: usize,
}

impl DistributionSummary {
    fn from_scores(mut scores: Vec<f64>) -> Self {
        let n = scores.len();
        assert!(n > 0, "summary of an empty score set");
        scores.sort_by(|a, b| a.partial_cmp(b).expect("scores are finite"));
        let mean = scores.iter().sum::<f64>() / n as f64;
        let variance = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n as f64;
        DistributionSummary {
            mean,
            sd: variance.sqrt(),
            q1: quantile(&scores, 0.25),
            median: quantile(&scores, 0.5),
            q3: quantile(&scores, 0.75),
            n,
        }
    }
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// One cell of a [`SimilarityMatrix`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CellStats {
    /// NaN when `count == 0` (serialized as null).
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl CellStats {
    const UNDEFINED: CellStats = CellStats {
        mean: f64::NAN,
        sd: f64::NAN,
        count: 0,
    };

    pub fn is_defined(&self) -> bool {
        self.count > 0
    }
}

/// Author x author similarity aggregate. Symmetric; the diagonal pools
/// within-author pairs, off-diagonal cells pool cross-author pairs that
/// share a prompt.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    pub labels: Vec<String>,
    cells: Vec<CellStats>,
}

impl SimilarityMatrix {
    pub fn get(&self, i: usize, j: usize) -> CellStats {
        self.cells[i * self.labels.len() + j]
    }

    fn set(&mut self, i: usize, j: usize, value: CellStats) {
        let n = self.labels.len();
        self.cells[i * n + j] = value;
        self.cells[j * n + i] = value;
    }

    /// CSV of cell means with author labels as header row and column.
    /// Undefined cells are left empty.
    pub fn mean_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("author");
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for j in 0..self.labels.len() {
                out.push(',');
                let cell = self.get(i, j);
                if cell.is_defined() {
                    out.push_str(&format!("{:.6}", cell.mean));
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON-friendly view with per-cell mean/sd/count (null mean when
    /// the cell is undefined).
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut cells = Vec::new();
        for i in 0..self.labels.len() {
            let mut row = Vec::new();
            for j in 0..self.labels.len() {
                let cell = self.get(i, j);
                row.push(serde_json::json!({
                    "mean": if cell.is_defined() { Some(cell.mean) } else { None },
                    "sd": if cell.is_defined() { Some(cell.sd) } else { None },
                    "count": cell.count,
                }));
            }
            cells.push(serde_json::Value::Array(row));
        }
        serde_json::json!({ "labels": self.labels, "cells": cells })
    }
}

/// A single scored pair, used for the optional per-pair dump.
#[derive(Debug, Clone, Serialize)]
pub struct PairScore {
    pub prompt_id: String,
    pub author_a: String,
    pub author_b: String,
    pub record_a: String,
    pub record_b: String,
    pub cosine: f64,
    pub edit_similarity: f64,
}

/// Tokenized docs and term vectors for the records an aggregation touches.
struct PairContext {
    tokens: Vec<Vec<String>>,
    vectors: Vec<TermVector>,
    /// corpus position -> local slot
    slots: HashMap<usize, usize>,
}

impl PairContext {
    fn prepare(corpus: &Corpus, positions: impl IntoIterator<Item = usize>) -> Result<Self> {
        let unique: BTreeSet<usize> = positions.into_iter().collect();
        let ordered: Vec<usize> = unique.into_iter().collect();
        let tokens: Vec<Vec<String>> = ordered
            .par_iter()
            .map(|&pos| tokenize(&corpus.record(pos).text).map(|doc| doc.tokens))
            .collect::<Result<_>>()?;
        let vectors: Vec<TermVector> = tokens.par_iter().map(|t| term_vector(t)).collect();
        let slots = ordered
            .iter()
            .enumerate()
            .map(|(slot, &pos)| (pos, slot))
            .collect();
        Ok(PairContext {
            tokens,
            vectors,
            slots,
        })
    }

    fn score(&self, metric: Metric, a: usize, b: usize) -> f64 {
        let (sa, sb) = (self.slots[&a], self.slots[&b]);
        match metric {
            Metric::Cosine => cosine_similarity(&self.vectors[sa], &self.vectors[sb]),
            Metric::Edit => edit_similarity(&self.tokens[sa], &self.tokens[sb])
                .expect("records always have tokens"),
        }
    }

    fn both_scores(&self, a: usize, b: usize) -> (f64, f64) {
        (
            self.score(Metric::Cosine, a, b),
            self.score(Metric::Edit, a, b),
        )
    }
}

/// FNV-1a over the cell identity, mixed with the run seed, so each
/// (prompt, author-pair) cell gets a stable sampling stream.
fn cell_seed(seed: u64, prompt: &str, author_a: &str, author_b: &str) -> u64 {
    let (lo, hi) = if author_a <= author_b {
        (author_a, author_b)
    } else {
        (author_b, author_a)
    };
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    let mut eat = |bytes: &[u8]| {
        for &byte in bytes {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(&seed.to_le_bytes());
    eat(prompt.as_bytes());
    eat(&[0x1f]);
    eat(lo.as_bytes());
    eat(&[0x1f]);
    eat(hi.as_bytes());
    h
}

/// Floyd's algorithm: `k` distinct values from `0..n`, returned sorted.
fn sample_distinct(n: u64, k: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    debug_assert!(k <= n);
    let mut chosen: BTreeSet<u64> = BTreeSet::new();
    for j in (n - k)..n {
        let candidate = rng.random_range(0..=j);
        if !chosen.insert(candidate) {
            chosen.insert(j);
        }
    }
    chosen.into_iter().collect()
}

/// Decode a linear index into the (i, j) pair with `i < j < n`, ordered by
/// row. Uses a binary search over the cumulative row sizes.
fn unordered_pair_at(n: u64, index: u64) -> (u64, u64) {
    let before = |i: u64| i * (n - 1) - i * (i.saturating_sub(1)) / 2;
    let (mut lo, mut hi) = (0u64, n - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if before(mid) <= index {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let i = lo;
    let j = i + 1 + (index - before(i));
    (i, j)
}

/// Enumerate (or sample, over budget) the pair list for one cell.
///
/// `group_b == None` means within-group unordered pairs.
fn cell_pairs(
    group_a: &[usize],
    group_b: Option<&[usize]>,
    budget: usize,
    seed: u64,
) -> Vec<(usize, usize)> {
    let total: u64 = match group_b {
        Some(b) => group_a.len() as u64 * b.len() as u64,
        None => {
            let n = group_a.len() as u64;
            n * n.saturating_sub(1) / 2
        }
    };
    if total == 0 {
        return Vec::new();
    }
    let decode = |index: u64| -> (usize, usize) {
        match group_b {
            Some(b) => {
                let nb = b.len() as u64;
                (group_a[(index / nb) as usize], b[(index % nb) as usize])
            }
            None => {
                let (i, j) = unordered_pair_at(group_a.len() as u64, index);
                (group_a[i as usize], group_a[j as usize])
            }
        }
    };
    if total <= budget as u64 {
        (0..total).map(decode).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_distinct(total, budget as u64, &mut rng)
            .into_iter()
            .map(decode)
            .collect()
    }
}

fn pooled_scores(
    corpus: &Corpus,
    ctx: &PairContext,
    author_a: &str,
    author_b: &str,
    opts: &SimilarityOptions,
) -> Vec<f64> {
    let prompts: Vec<&str> = corpus.prompts().collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for prompt in prompts {
        let group_a = corpus.group(prompt, author_a);
        if author_a == author_b {
            if group_a.len() < 2 {
                continue;
            }
            pairs.extend(cell_pairs(
                &group_a,
                None,
                opts.pair_budget,
                cell_seed(opts.seed, prompt, author_a, author_b),
            ));
        } else {
            let group_b = corpus.group(prompt, author_b);
            if group_a.is_empty() || group_b.is_empty() {
                continue;
            }
            pairs.extend(cell_pairs(
                &group_a,
                Some(&group_b),
                opts.pair_budget,
                cell_seed(opts.seed, prompt, author_a, author_b),
            ));
        }
    }
    pairs
        .par_iter()
        .map(|&(a, b)| ctx.score(opts.metric, a, b))
        .collect()
}

/// Pooled distribution of same-prompt pair scores within one author.
///
/// Errors with [`Error::NoPairs`] when the author is absent or never has
/// two texts for the same prompt.
pub fn inner_similarity(
    corpus: &Corpus,
    author: &str,
    opts: &SimilarityOptions,
) -> Result<DistributionSummary> {
    if !corpus.has_author(author) {
        return Err(Error::NoPairs {
            author: author.to_string(),
        });
    }
    let ctx = PairContext::prepare(corpus, corpus.author_records(author))?;
    let scores = pooled_scores(corpus, &ctx, author, author, opts);
    if scores.is_empty() {
        return Err(Error::NoPairs {
            author: author.to_string(),
        });
    }
    Ok(DistributionSummary::from_scores(scores))
}

/// Full author x author matrix. Off-diagonal cells average cross-author
/// same-prompt pairs; diagonal cells pool within-author pairs. Cells with
/// no eligible pairs are undefined (count 0).
pub fn inter_similarity(corpus: &Corpus, opts: &SimilarityOptions) -> Result<SimilarityMatrix> {
    let labels: Vec<String> = corpus.authors().map(str::to_string).collect();
    if labels.len() < 2 {
        return Err(Error::SingleAuthor);
    }
    let ctx = PairContext::prepare(corpus, 0..corpus.len())?;
    let mut matrix = SimilarityMatrix {
        cells: vec![CellStats::UNDEFINED; labels.len() * labels.len()],
        labels,
    };
    for i in 0..matrix.labels.len() {
        for j in i..matrix.labels.len() {
            let (author_a, author_b) = (matrix.labels[i].clone(), matrix.labels[j].clone());
            let scores = pooled_scores(corpus, &ctx, &author_a, &author_b, opts);
            if scores.is_empty() {
                continue;
            }
            let summary = DistributionSummary::from_scores(scores);
            matrix.set(
                i,
                j,
                CellStats {
                    mean: summary.mean,
                    sd: summary.sd,
                    count: summary.n,
                },
            );
        }
    }
    Ok(matrix)
}

/// Every scored pair with both metrics, for the per-pair distribution dump.
/// Subject to the same per-cell budget and seeding as the aggregates.
pub fn pair_scores(corpus: &Corpus, opts: &SimilarityOptions) -> Result<Vec<PairScore>> {
    let labels: Vec<String> = corpus.authors().map(str::to_string).collect();
    let ctx = PairContext::prepare(corpus, 0..corpus.len())?;
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in i..labels.len() {
            let (author_a, author_b) = (&labels[i], &labels[j]);
            for prompt in corpus.prompts().map(str::to_string).collect::<Vec<_>>() {
                let group_a = corpus.group(&prompt, author_a);
                let seed = cell_seed(opts.seed, &prompt, author_a, author_b);
                let pairs = if author_a == author_b {
                    cell_pairs(&group_a, None, opts.pair_budget, seed)
                } else {
                    let group_b = corpus.group(&prompt, author_b);
                    cell_pairs(&group_a, Some(&group_b), opts.pair_budget, seed)
                };
                let scored: Vec<(f64, f64)> = pairs
                    .par_iter()
                    .map(|&(a, b)| ctx.both_scores(a, b))
                    .collect();
                for (&(a, b), (cosine, edit)) in pairs.iter().zip(scored) {
                    out.push(PairScore {
                        prompt_id: prompt.clone(),
                        author_a: author_a.clone(),
                        author_b: author_b.clone(),
                        record_a: corpus.record(a).id.clone(),
                        record_b: corpus.record(b).id.clone(),
                        cosine,
                        edit_similarity: edit,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Term weighting for the document-vector export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorWeighting {
    Tf,
    TfIdf,
}

impl std::str::FromStr for VectorWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(VectorWeighting::Tf),
            "tfidf" => Ok(VectorWeighting::TfIdf),
            other => Err(Error::Config(format!(
                "unknown weighting {other:?} (expected tf or tfidf)"
            ))),
        }
    }
}

/// One labeled sparse document vector.
#[derive(Debug, Clone, Serialize)]
pub struct DocVectorRow {
    pub record_id: String,
    pub author: String,
    pub prompt_id: String,
    pub weights: BTreeMap<String, f64>,
}

/// Export one labeled sparse vector per record, for external projection
/// tooling. `tfidf` weights each count by `ln(1 + N/df)` with `N` the
/// corpus size and `df` computed over the whole corpus regardless of any
/// author filter.
pub fn export_doc_vectors(
    corpus: &Corpus,
    weighting: VectorWeighting,
    authors: Option<&[String]>,
) -> Result<Vec<DocVectorRow>> {
    let tokenized: Vec<Vec<String>> = (0..corpus.len())
        .into_par_iter()
        .map(|pos| tokenize(&corpus.record(pos).text).map(|d| d.tokens))
        .collect::<Result<_>>()?;

    let idf: HashMap<&str, f64> = match weighting {
        VectorWeighting::Tf => HashMap::new(),
        VectorWeighting::TfIdf => {
            let mut df: HashMap<&str, usize> = HashMap::new();
            for tokens in &tokenized {
                let types: BTreeSet<&str> = tokens.iter().map(String::as_str).collect();
                for t in types {
                    *df.entry(t).or_insert(0) += 1;
                }
            }
            let n = corpus.len() as f64;
            df.into_iter()
                .map(|(t, d)| (t, (1.0 + n / d as f64).ln()))
                .collect()
        }
    };

    let mut rows = Vec::new();
    for (pos, tokens) in tokenized.iter().enumerate() {
        let record = corpus.record(pos);
        if let Some(filter) = authors {
            if !filter.iter().any(|a| a == &record.author) {
                continue;
            }
        }
        let mut weights: BTreeMap<String, f64> = BTreeMap::new();
        for token in tokens {
            *weights.entry(token.clone()).or_insert(0.0) += 1.0;
        }
        if weighting == VectorWeighting::TfIdf {
            for (token, weight) in weights.iter_mut() {
                *weight *= idf[token.as_str()];
            }
        }
        rows.push(DocVectorRow {
            record_id: record.id.clone(),
            author: record.author.clone(),
            prompt_id: record.prompt_id.clone(),
            weights,
        });
    }
    Ok(rows)
}
