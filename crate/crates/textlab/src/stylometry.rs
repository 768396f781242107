//! Readability statistics and corpus-level text measures.
//!
//! Per-document statistics: difficult-word count, Flesch reading ease
//! `206.835 - 1.015*(words/sentences) - 84.6*(syllables/words)`, reading
//! time at a words-per-minute speed, a consensus grade level over four
//! component formulas (Flesch-Kincaid, Automated Readability Index,
//! Coleman-Liau, Gunning Fog), and mono-/polysyllable counts.
//!
//! Per-author measures: mean per-document unique-word ratio, Shannon
//! entropy (bits) of the pooled unigram distribution, pooled syllable
//! ratios, and MTLD lexical diversity at the conventional 0.72 type-token
//! threshold.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{tokenize, Corpus, TokenizedDoc};
use crate::error::{Error, Result};

/// Default silent-reading speed (words per minute) for adults.
pub const DEFAULT_WPM: f64 = 238.0;

/// Per-document readability statistics.
#[derive(Debug, Clone, Serialize)]
pub struct ReadabilityReport {
    pub difficult_words: usize,
    pub flesch_reading_ease: f64,
    pub reading_time_s: f64,
    pub text_standard_grade: f64,
    pub monosyllable_count: usize,
    pub polysyllable_count: usize,
    pub token_count: usize,
    pub sentence_count: usize,
}

/// Mean and population standard deviation of one statistic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    fn of(values: impl Iterator<Item = f64>) -> Stat {
        let values: Vec<f64> = values.collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Stat {
            mean,
            sd: variance.sqrt(),
        }
    }
}

/// Per-author aggregation of [`ReadabilityReport`] fields.
#[derive(Debug, Clone, Serialize)]
pub struct AuthorReadability {
    pub author: String,
    pub documents: usize,
    pub difficult_words: Stat,
    pub flesch_reading_ease: Stat,
    pub reading_time_s: Stat,
    pub text_standard_grade: Stat,
    pub monosyllable_count: Stat,
    pub polysyllable_count: Stat,
}

/// Corpus-level measures for one author.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusMeasures {
    /// Mean over documents of `100 * types / tokens`.
    pub unique_word_ratio: f64,
    /// Shannon entropy (base 2) of the pooled unigram distribution.
    pub entropy_bits: f64,
    /// `100 * class count / token count`, pooled over all documents.
    pub monosyllable_ratio: f64,
    pub polysyllable_ratio: f64,
    /// MTLD over the pooled token stream.
    pub lexical_diversity: f64,
}

/// Count word types that are absent from the easy list and have at least
/// two syllables. Each distinct word counts once however often it occurs.
pub fn difficult_words(doc: &TokenizedDoc, easy_list: &HashSet<String>) -> usize {
    let types: HashSet<&String> = doc.tokens.iter().collect();
    types
        .into_iter()
        .filter(|w| !easy_list.contains(*w) && crate::corpus::count_syllables(w) >= 2)
        .count()
}

/// Flesch reading ease: higher is easier; ~121.22 is the attainable maximum.
pub fn flesch_reading_ease(doc: &TokenizedDoc) -> f64 {
    let words = doc.token_count() as f64;
    let sentences = doc.sentence_count() as f64;
    let syllables = doc.syllable_total() as f64;
    206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)
}

/// Seconds an average reader needs at `wpm` words per minute.
pub fn reading_time(doc: &TokenizedDoc, wpm: f64) -> Result<f64> {
    if wpm <= 0.0 || !wpm.is_finite() {
        return Err(Error::Config(format!(
            "reading speed must be positive, got {wpm}"
        )));
    }
    Ok(doc.token_count() as f64 / wpm * 60.0)
}

/// Flesch-Kincaid grade level.
pub fn flesch_kincaid_grade(doc: &TokenizedDoc) -> f64 {
    let words = doc.token_count() as f64;
    let sentences = doc.sentence_count() as f64;
    let syllables = doc.syllable_total() as f64;
    0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59
}

/// Automated Readability Index over letter/digit characters.
pub fn automated_readability_index(doc: &TokenizedDoc) -> f64 {
    let words = doc.token_count() as f64;
    let sentences = doc.sentence_count() as f64;
    let chars = doc.char_count as f64;
    4.71 * (chars / words) + 0.5 * (words / sentences) - 21.43
}

/// Coleman-Liau index via letters and sentences per 100 words.
pub fn coleman_liau_index(doc: &TokenizedDoc) -> f64 {
    let words = doc.token_count() as f64;
    let letters_per_100 = 100.0 * doc.char_count as f64 / words;
    let sentences_per_100 = 100.0 * doc.sentence_count() as f64 / words;
    0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8
}

/// Gunning Fog index; complex words are those with three or more syllables.
pub fn gunning_fog(doc: &TokenizedDoc) -> f64 {
    let words = doc.token_count() as f64;
    let sentences = doc.sentence_count() as f64;
    let complex = doc.syllables.iter().filter(|&&s| s >= 3).count() as f64;
    0.4 * ((words / sentences) + 100.0 * (complex / words))
}

/// Consensus grade level: each component grade is rounded half away from
/// zero; a value shared by more grades than any other wins; otherwise the
/// median of the rounded grades (mean of the middle two for an even count).
pub fn text_standard(doc: &TokenizedDoc) -> f64 {
    let grades = [
        flesch_kincaid_grade(doc),
        automated_readability_index(doc),
        coleman_liau_index(doc),
        gunning_fog(doc),
    ];
    consensus_grade(&grades)
}

/// Consensus over already-computed component grades (see
/// [`text_standard`] for the rule).
pub fn consensus_grade(grades: &[f64]) -> f64 {
    let mut rounded: Vec<i64> = grades.iter().map(|g| g.round() as i64).collect();
    rounded.sort_unstable();
    let mut freq: BTreeMap<i64, usize> = BTreeMap::new();
    for &g in &rounded {
        *freq.entry(g).or_insert(0) += 1;
    }
    let best = freq.values().copied().max().unwrap_or(0);
    let modes: Vec<i64> = freq
        .iter()
        .filter(|(_, &count)| count == best)
        .map(|(&g, _)| g)
        .collect();
    if best > 1 && modes.len() == 1 {
        return modes[0] as f64;
    }
    let mid = rounded.len() / 2;
    if rounded.len() % 2 == 1 {
        rounded[mid] as f64
    } else {
        (rounded[mid - 1] + rounded[mid]) as f64 / 2.0
    }
}

/// `(monosyllable count, polysyllable count)`: tokens with exactly one
/// syllable and tokens with three or more. Two-syllable tokens fall in
/// neither class.
pub fn syllable_profile(doc: &TokenizedDoc) -> (usize, usize) {
    let mono = doc.syllables.iter().filter(|&&s| s == 1).count();
    let poly = doc.syllables.iter().filter(|&&s| s >= 3).count();
    (mono, poly)
}

/// Full per-document report.
pub fn readability_report(
    doc: &TokenizedDoc,
    easy_list: &HashSet<String>,
    wpm: f64,
) -> Result<ReadabilityReport> {
    let (mono, poly) = syllable_profile(doc);
    Ok(ReadabilityReport {
        difficult_words: difficult_words(doc, easy_list),
        flesch_reading_ease: flesch_reading_ease(doc),
        reading_time_s: reading_time(doc, wpm)?,
        text_standard_grade: text_standard(doc),
        monosyllable_count: mono,
        polysyllable_count: poly,
        token_count: doc.token_count(),
        sentence_count: doc.sentence_count(),
    })
}

fn author_docs(corpus: &Corpus, author: &str) -> Result<Vec<TokenizedDoc>> {
    if !corpus.has_author(author) {
        return Err(Error::UnknownAuthor(author.to_string()));
    }
    corpus
        .author_records(author)
        .par_iter()
        .map(|&pos| tokenize(&corpus.record(pos).text))
        .collect()
}

/// Mean and sd of every readability statistic over one author's documents.
pub fn author_readability(
    corpus: &Corpus,
    author: &str,
    easy_list: &HashSet<String>,
    wpm: f64,
) -> Result<AuthorReadability> {
    let docs = author_docs(corpus, author)?;
    let reports: Vec<ReadabilityReport> = docs
        .par_iter()
        .map(|doc| readability_report(doc, easy_list, wpm))
        .collect::<Result<_>>()?;
    Ok(AuthorReadability {
        author: author.to_string(),
        documents: reports.len(),
        difficult_words: Stat::of(reports.iter().map(|r| r.difficult_words as f64)),
        flesch_reading_ease: Stat::of(reports.iter().map(|r| r.flesch_reading_ease)),
        reading_time_s: Stat::of(reports.iter().map(|r| r.reading_time_s)),
        text_standard_grade: Stat::of(reports.iter().map(|r| r.text_standard_grade)),
        monosyllable_count: Stat::of(reports.iter().map(|r| r.monosyllable_count as f64)),
        polysyllable_count: Stat::of(reports.iter().map(|r| r.polysyllable_count as f64)),
    })
}

/// Corpus-level measures over one author's pooled token stream.
pub fn corpus_measures(corpus: &Corpus, author: &str) -> Result<CorpusMeasures> {
    let docs = author_docs(corpus, author)?;

    let unique_word_ratio = docs
        .iter()
        .map(|doc| {
            let types: HashSet<&String> = doc.tokens.iter().collect();
            100.0 * types.len() as f64 / doc.token_count() as f64
        })
        .sum::<f64>()
        / docs.len() as f64;

    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    let mut mono = 0usize;
    let mut poly = 0usize;
    let mut total = 0usize;
    let mut pooled: Vec<&str> = Vec::new();
    for doc in &docs {
        for (token, &syll) in doc.tokens.iter().zip(&doc.syllables) {
            *counts.entry(token).or_insert(0) += 1;
            if syll == 1 {
                mono += 1;
            } else if syll >= 3 {
                poly += 1;
            }
            total += 1;
            pooled.push(token);
        }
    }
    let total_f = total as f64;
    let entropy_bits = -counts
        .values()
        .map(|&c| {
            let p = c as f64 / total_f;
            p * p.log2()
        })
        .sum::<f64>();

    Ok(CorpusMeasures {
        unique_word_ratio,
        // -0.0 from a single-type stream normalizes to 0.0
        entropy_bits: entropy_bits + 0.0,
        monosyllable_ratio: 100.0 * mono as f64 / total_f,
        polysyllable_ratio: 100.0 * poly as f64 / total_f,
        lexical_diversity: mtld(&pooled),
    })
}

/// Measure of Textual Lexical Diversity: mean factor length at a 0.72
/// type-token threshold, averaged over forward and reverse passes. A
/// stream that never completes a factor (including a partial one) scores
/// its own length.
pub fn mtld<T: AsRef<str>>(tokens: &[T]) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    let forward = mtld_pass(tokens.iter().map(AsRef::as_ref));
    let backward = mtld_pass(tokens.iter().rev().map(AsRef::as_ref));
    (forward + backward) / 2.0
}

fn mtld_pass<'a>(stream: impl Iterator<Item = &'a str>) -> f64 {
    const THRESHOLD: f64 = 0.72;
    let mut factors = 0.0f64;
    let mut types: HashSet<&str> = HashSet::new();
    let mut span = 0usize;
    let mut total = 0usize;
    for token in stream {
        total += 1;
        span += 1;
        types.insert(token);
        if types.len() as f64 / span as f64 <= THRESHOLD {
            factors += 1.0;
            types.clear();
            span = 0;
        }
    }
    if span > 0 {
        let ttr = types.len() as f64 / span as f64;
        if ttr < 1.0 {
            factors += (1.0 - ttr) / (1.0 - THRESHOLD);
        }
    }
    if factors == 0.0 {
        total as f64
    } else {
        total as f64 / factors
    }
}
