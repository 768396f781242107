//! Per-author language markers via pointwise mutual information.
//!
//! Words and author classes are treated as a joint distribution over
//! pooled token counts: `PMI(w, c) = log2( P(w,c) / (P(w) * P(c)) )`.
//! Entries whose joint count falls below a minimum are dropped as an
//! unstable low-frequency tail. Ranked marker lists and min-max-weighted
//! word-cloud data are derived from the table.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{tokenize, Corpus};
use crate::error::{Error, Result};

/// Weight floor for word-cloud entries so the minimum-PMI word stays visible.
pub const WORDCLOUD_FLOOR: f64 = 0.05;

/// Joint PMI table over (word, author) pairs.
#[derive(Debug, Clone)]
pub struct PmiTable {
    /// (word, author) -> PMI, only for joint counts >= `min_count`.
    entries: BTreeMap<(String, String), f64>,
    /// word -> total count over all authors (ungated).
    word_totals: BTreeMap<String, u64>,
    /// author -> pooled token total (ungated).
    author_totals: BTreeMap<String, u64>,
    /// (word, author) -> joint count (ungated).
    joint_counts: BTreeMap<(String, String), u64>,
    min_count: u64,
    grand_total: u64,
}

impl PmiTable {
    pub fn pmi(&self, word: &str, author: &str) -> Option<f64> {
        self.entries
            .get(&(word.to_string(), author.to_string()))
            .copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.entries
            .iter()
            .map(|((w, a), &pmi)| (w.as_str(), a.as_str(), pmi))
    }

    pub fn joint_count(&self, word: &str, author: &str) -> u64 {
        self.joint_counts
            .get(&(word.to_string(), author.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn word_total(&self, word: &str) -> u64 {
        self.word_totals.get(word).copied().unwrap_or(0)
    }

    pub fn author_total(&self, author: &str) -> u64 {
        self.author_totals.get(author).copied().unwrap_or(0)
    }

    pub fn authors(&self) -> impl Iterator<Item = &str> {
        self.author_totals.keys().map(String::as_str)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.word_totals.keys().map(String::as_str)
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    pub fn grand_total(&self) -> u64 {
        self.grand_total
    }

    pub fn has_author(&self, author: &str) -> bool {
        self.author_totals.contains_key(author)
    }

    /// Estimated joint probability `P(w, c)`.
    pub fn joint_probability(&self, word: &str, author: &str) -> f64 {
        self.joint_count(word, author) as f64 / self.grand_total as f64
    }

    /// Estimated word marginal `P(w)`.
    pub fn word_probability(&self, word: &str) -> f64 {
        self.word_total(word) as f64 / self.grand_total as f64
    }

    /// Estimated class marginal `P(c)`.
    pub fn author_probability(&self, author: &str) -> f64 {
        self.author_total(author) as f64 / self.grand_total as f64
    }
}

/// A ranked marker with its backing counts.
#[derive(Debug, Clone, Serialize)]
pub struct Marker {
    pub word: String,
    pub pmi: f64,
    pub joint_count: u64,
}

/// A word-cloud entry: weight in `(0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct WeightedWord {
    pub word: String,
    pub weight: f64,
}

/// Build the PMI table from pooled token counts, dropping entries whose
/// joint count is below `min_count`. Stop words, when given, are excluded
/// from counting entirely.
pub fn compute_pmi_filtered(
    corpus: &Corpus,
    min_count: u64,
    stop_words: Option<&HashSet<String>>,
) -> Result<PmiTable> {
    if corpus.is_empty() {
        return Err(Error::Format("empty corpus".to_string()));
    }
    if corpus.author_count() < 2 {
        return Err(Error::SingleAuthor);
    }
    if min_count < 1 {
        return Err(Error::Config("min_count must be at least 1".to_string()));
    }

    // parallel per-record counting with a commutative merge
    let partials: Vec<BTreeMap<(String, String), u64>> = (0..corpus.len())
        .into_par_iter()
        .map(|pos| {
            let record = corpus.record(pos);
            let doc = tokenize(&record.text)?;
            let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
            for token in doc.tokens {
                if let Some(stops) = stop_words {
                    if stops.contains(&token) {
                        continue;
                    }
                }
                *counts.entry((token, record.author.clone())).or_insert(0) += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;

    let mut joint_counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for partial in partials {
        for (key, count) in partial {
            *joint_counts.entry(key).or_insert(0) += count;
        }
    }

    let mut word_totals: BTreeMap<String, u64> = BTreeMap::new();
    let mut author_totals: BTreeMap<String, u64> = BTreeMap::new();
    for ((word, author), &count) in &joint_counts {
        *word_totals.entry(word.clone()).or_insert(0) += count;
        *author_totals.entry(author.clone()).or_insert(0) += count;
    }
    let grand_total: u64 = author_totals.values().sum();
    if grand_total == 0 {
        return Err(Error::Format(
            "no countable tokens (all tokens filtered)".to_string(),
        ));
    }

    let total = grand_total as f64;
    let mut entries: BTreeMap<(String, String), f64> = BTreeMap::new();
    for ((word, author), &joint) in &joint_counts {
        if joint < min_count {
            continue;
        }
        let p_joint = joint as f64 / total;
        let p_word = word_totals[word] as f64 / total;
        let p_author = author_totals[author] as f64 / total;
        entries.insert(
            (word.clone(), author.clone()),
            (p_joint / (p_word * p_author)).log2(),
        );
    }

    Ok(PmiTable {
        entries,
        word_totals,
        author_totals,
        joint_counts,
        min_count,
        grand_total,
    })
}

/// [`compute_pmi_filtered`] without stop-word removal.
pub fn compute_pmi(corpus: &Corpus, min_count: u64) -> Result<PmiTable> {
    compute_pmi_filtered(corpus, min_count, None)
}

/// The `k` highest-PMI words for one author, descending. Ties break toward
/// the higher joint count, then lexicographically smaller word.
pub fn top_markers(table: &PmiTable, author: &str, k: usize) -> Result<Vec<Marker>> {
    if k == 0 {
        return Err(Error::Config("marker count must be positive".to_string()));
    }
    if !table.has_author(author) {
        return Err(Error::UnknownAuthor(author.to_string()));
    }
    let mut markers: Vec<Marker> = table
        .entries
        .iter()
        .filter(|((_, a), _)| a == author)
        .map(|((w, a), &pmi)| Marker {
            word: w.clone(),
            pmi,
            joint_count: table.joint_count(w, a),
        })
        .collect();
    markers.sort_by(|x, y| {
        y.pmi
            .partial_cmp(&x.pmi)
            .expect("PMI values are finite")
            .then(y.joint_count.cmp(&x.joint_count))
            .then(x.word.cmp(&y.word))
    });
    markers.truncate(k);
    Ok(markers)
}

/// Word-cloud weights: PMI min-max normalized over the selected markers,
/// floored at [`WORDCLOUD_FLOOR`]. Degenerate spreads (a single marker, or
/// all PMI equal) weight everything 1.0.
pub fn export_wordcloud(table: &PmiTable, author: &str, k: usize) -> Result<Vec<WeightedWord>> {
    let markers = top_markers(table, author, k)?;
    let lo = markers.iter().map(|m| m.pmi).fold(f64::INFINITY, f64::min);
    let hi = markers
        .iter()
        .map(|m| m.pmi)
        .fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    Ok(markers
        .into_iter()
        .map(|m| WeightedWord {
            weight: if spread == 0.0 {
                1.0
            } else {
                ((m.pmi - lo) / spread).max(WORDCLOUD_FLOOR)
            },
            word: m.word,
        })
        .collect())
}
