//! Corpus loading, validation, and the canonical tokenization.
//!
//! A corpus is a JSON-lines file, one record per line:
//!
//! ```text
//! {"id": "r1", "prompt_id": "p1", "author": "gpt-4", "text": "The cat sat."}
//! ```
//!
//! Every analysis in this crate operates on the tokenization produced here:
//! lowercased maximal runs of letters, digits, and apostrophes, with
//! sentences split on `.`, `!`, or `?` followed by whitespace or end of
//! input. Syllables are counted with a vowel-group heuristic so that all
//! readability statistics are reproducible from the token stream alone.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One prompt-keyed, author-labeled document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextRecord {
    /// Unique record id within the corpus.
    pub id: String,
    /// Prompt the text was produced for.
    pub prompt_id: String,
    /// Author label: an LLM name or `"human"`.
    pub author: String,
    /// The document body, UTF-8.
    pub text: String,
}

/// A rejected input line, reported by [`load_corpus`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedLine {
    /// 1-based line number in the source file.
    pub line: usize,
    pub reason: String,
}

/// An in-memory corpus with a (prompt, author) index.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    records: Vec<TextRecord>,
    /// (prompt_id, author) -> positions into `records`.
    index: HashMap<(String, String), Vec<usize>>,
    authors: BTreeSet<String>,
    prompts: BTreeSet<String>,
}

impl Corpus {
    /// Build a corpus from records, validating each one.
    ///
    /// Fails on a duplicate record id; individual field problems are
    /// rejected per record (see [`validate_record`]).
    pub fn from_records(records: Vec<TextRecord>) -> Result<Self> {
        let mut corpus = Corpus::default();
        for record in records {
            validate_record(&record).map_err(Error::Format)?;
            corpus.push(record)?;
        }
        Ok(corpus)
    }

    fn push(&mut self, record: TextRecord) -> Result<()> {
        if self.records.iter().any(|r| r.id == record.id) {
            return Err(Error::DuplicateRecordId(record.id));
        }
        let pos = self.records.len();
        self.index
            .entry((record.prompt_id.clone(), record.author.clone()))
            .or_default()
            .push(pos);
        self.authors.insert(record.author.clone());
        self.prompts.insert(record.prompt_id.clone());
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[TextRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Distinct authors, sorted.
    pub fn authors(&self) -> impl Iterator<Item = &str> {
        self.authors.iter().map(String::as_str)
    }

    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn has_author(&self, author: &str) -> bool {
        self.authors.contains(author)
    }

    /// Distinct prompt ids, sorted.
    pub fn prompts(&self) -> impl Iterator<Item = &str> {
        self.prompts.iter().map(String::as_str)
    }

    pub fn prompt_count(&self) -> usize {
        self.prompts.len()
    }

    /// Record positions for a (prompt, author) group, sorted by record id.
    ///
    /// The canonical order makes every downstream aggregation independent
    /// of the order records appeared in the source file.
    pub fn group(&self, prompt_id: &str, author: &str) -> Vec<usize> {
        let mut positions = self
            .index
            .get(&(prompt_id.to_string(), author.to_string()))
            .cloned()
            .unwrap_or_default();
        positions.sort_by(|&a, &b| self.records[a].id.cmp(&self.records[b].id));
        positions
    }

    /// Record positions for one author across all prompts, sorted by record id.
    pub fn author_records(&self, author: &str) -> Vec<usize> {
        let mut positions: Vec<usize> = self
            .records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.author == author)
            .map(|(i, _)| i)
            .collect();
        positions.sort_by(|&a, &b| self.records[a].id.cmp(&self.records[b].id));
        positions
    }

    pub fn record(&self, pos: usize) -> &TextRecord {
        &self.records[pos]
    }
}

/// Validate one record against the schema invariants.
///
/// A record must have a non-empty id and author, and text that contains at
/// least one word token (punctuation-only bodies are unusable by every
/// analysis and are rejected here rather than failing later).
pub fn validate_record(record: &TextRecord) -> std::result::Result<(), String> {
    if record.id.is_empty() {
        return Err("empty record id".to_string());
    }
    if record.author.is_empty() {
        return Err("empty author".to_string());
    }
    if record.text.trim().is_empty() {
        return Err("text empty after trim".to_string());
    }
    if !record.text.chars().any(|c| c.is_alphanumeric()) {
        return Err("text contains no word tokens".to_string());
    }
    Ok(())
}

/// Result of [`load_corpus`]: the valid records plus per-line rejections.
#[derive(Debug)]
pub struct LoadOutcome {
    pub corpus: Corpus,
    pub rejected: Vec<RejectedLine>,
}

/// Load a JSONL corpus from disk.
///
/// Malformed or invalid lines are collected in [`LoadOutcome::rejected`]
/// and do not abort the load. An unreadable file or a duplicate record id
/// is fatal.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<LoadOutcome> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut corpus = Corpus::default();
    let mut rejected = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TextRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                rejected.push(RejectedLine {
                    line: lineno,
                    reason: format!("invalid json: {e}"),
                });
                continue;
            }
        };
        if let Err(reason) = validate_record(&record) {
            rejected.push(RejectedLine {
                line: lineno,
                reason,
            });
            continue;
        }
        corpus.push(record)?;
    }
    Ok(LoadOutcome { corpus, rejected })
}

/// Write a corpus back out as JSONL, one record per line, LF-terminated.
pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for record in corpus.records() {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// A tokenized document: lowercased word tokens, sentence spans over token
/// indices, per-token syllable counts, and the alphanumeric character count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDoc {
    pub tokens: Vec<String>,
    /// Half-open `(start, end)` token ranges; they partition `0..tokens.len()`.
    pub sentence_spans: Vec<(usize, usize)>,
    /// One count per token, each >= 1.
    pub syllables: Vec<usize>,
    /// Letters and digits across all tokens (apostrophes excluded).
    pub char_count: usize,
}

impl TokenizedDoc {
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentence_spans.len()
    }

    pub fn syllable_total(&self) -> usize {
        self.syllables.iter().sum()
    }
}

/// Tokenize a text into the canonical form used by every analysis.
///
/// Tokens are maximal runs of letters, digits, and apostrophes that contain
/// at least one letter or digit, lowercased. Sentences end at `.`, `!`, or
/// `?` followed by whitespace or end of input; text without terminal
/// punctuation is a single sentence.
///
/// Errors with [`Error::EmptyText`] when the text is blank or yields no
/// tokens.
pub fn tokenize(text: &str) -> Result<TokenizedDoc> {
    if text.trim().is_empty() {
        return Err(Error::EmptyText);
    }

    let mut tokens: Vec<String> = Vec::new();
    let mut syllables: Vec<usize> = Vec::new();
    let mut sentence_spans: Vec<(usize, usize)> = Vec::new();
    let mut char_count = 0usize;

    let mut current = String::new();
    let mut current_has_word_char = false;
    let mut sentence_start = 0usize;

    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_alphanumeric() || ch == '\'' {
            if ch.is_alphanumeric() {
                current_has_word_char = true;
                char_count += 1;
            }
            current.extend(ch.to_lowercase());
            continue;
        }
        if current_has_word_char {
            let token = std::mem::take(&mut current);
            syllables.push(count_syllables(&token));
            tokens.push(token);
        } else {
            current.clear();
        }
        current_has_word_char = false;

        if matches!(ch, '.' | '!' | '?') {
            let at_boundary = match chars.peek() {
                None => true,
                Some(next) => next.is_whitespace(),
            };
            if at_boundary && tokens.len() > sentence_start {
                sentence_spans.push((sentence_start, tokens.len()));
                sentence_start = tokens.len();
            }
        }
    }
    if current_has_word_char {
        syllables.push(count_syllables(&current));
        tokens.push(current);
    }
    if tokens.len() > sentence_start {
        sentence_spans.push((sentence_start, tokens.len()));
    }

    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(TokenizedDoc {
        tokens,
        sentence_spans,
        syllables,
        char_count,
    })
}

/// Heuristic syllable count: vowel groups (`a e i o u y`), minus a trailing
/// silent `e` unless that would reach zero, floored at 1.
pub fn count_syllables(word: &str) -> usize {
    let mut groups = 0usize;
    let mut in_group = false;
    for ch in word.chars() {
        let is_vowel = matches!(ch, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
        if is_vowel && !in_group {
            groups += 1;
        }
        in_group = is_vowel;
    }
    if groups > 1 && word.ends_with('e') {
        groups -= 1;
    }
    groups.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(id: &str, prompt: &str, author: &str, text: &str) -> TextRecord {
        TextRecord {
            id: id.to_string(),
            prompt_id: prompt.to_string(),
            author: author.to_string(),
            text: text.to_string(),
        }
    }

    #[test]
    fn tokenize_simple_sentence() {
        let doc = tokenize("The cat sat.").unwrap();
        assert_eq!(doc.tokens, vec!["the", "cat", "sat"]);
        assert_eq!(doc.sentence_spans, vec![(0, 3)]);
        assert_eq!(doc.syllables, vec![1, 1, 1]);
        assert_eq!(doc.char_count, 9);
    }

    #[test]
    fn tokenize_two_sentences() {
        let doc = tokenize("Hi! Go.").unwrap();
        assert_eq!(doc.tokens, vec!["hi", "go"]);
        assert_eq!(doc.sentence_spans, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn tokenize_rejects_blank() {
        assert!(matches!(tokenize("   "), Err(Error::EmptyText)));
        assert!(matches!(tokenize("?! ... !"), Err(Error::EmptyText)));
    }

    #[test]
    fn tokenize_keeps_apostrophes_and_digits() {
        let doc = tokenize("Don't count 42 sheep\u{2026} ok?").unwrap();
        assert_eq!(doc.tokens, vec!["don't", "count", "42", "sheep", "ok"]);
        assert_eq!(doc.sentence_count(), 1);
    }

    #[test]
    fn tokenize_decimal_point_is_not_a_boundary() {
        let doc = tokenize("Pi is 3.14 roughly. Yes.").unwrap();
        assert_eq!(doc.tokens, vec!["pi", "is", "3", "14", "roughly", "yes"]);
        assert_eq!(doc.sentence_spans, vec![(0, 5), (5, 6)]);
    }

    #[test]
    fn syllable_examples() {
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("banana"), 3);
        assert_eq!(count_syllables("the"), 1);
        assert_eq!(count_syllables("see"), 1);
        assert_eq!(count_syllables("date"), 1);
        assert_eq!(count_syllables("paper"), 2);
        assert_eq!(count_syllables("epistemology"), 6);
        assert_eq!(count_syllables("rhythm"), 1);
        assert_eq!(count_syllables("42"), 1);
    }

    #[test]
    fn from_records_builds_index() {
        let corpus = Corpus::from_records(vec![
            record("r1", "p1", "a", "one two"),
            record("r2", "p1", "b", "three"),
            record("r3", "p2", "a", "four"),
        ])
        .unwrap();
        assert_eq!(corpus.len(), 3);
        assert_eq!(corpus.author_count(), 2);
        assert_eq!(corpus.prompt_count(), 2);
        assert_eq!(corpus.group("p1", "a"), vec![0]);
        assert!(corpus.group("p2", "b").is_empty());
    }

    #[test]
    fn duplicate_id_is_fatal() {
        let err = Corpus::from_records(vec![
            record("r1", "p1", "a", "one"),
            record("r1", "p1", "b", "two"),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateRecordId(id) if id == "r1"));
    }

    #[test]
    fn load_collects_rejections() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"id\":\"r1\",\"prompt_id\":\"p1\",\"author\":\"a\",\"text\":\"hello world\"}\n",
                "{\"id\":\"r2\",\"prompt_id\":\"p1\",\"author\":\"a\"}\n",
                "{\"id\":\"r3\",\"prompt_id\":\"p1\",\"author\":\"a\",\"text\":\"   \"}\n",
                "not json at all\n",
                "{\"id\":\"r4\",\"prompt_id\":\"p2\",\"author\":\"b\",\"text\":\"fine text\"}\n",
            ),
        )
        .unwrap();

        let outcome = load_corpus(&path).unwrap();
        assert_eq!(outcome.corpus.len(), 2);
        let lines: Vec<usize> = outcome.rejected.iter().map(|r| r.line).collect();
        assert_eq!(lines, vec![2, 3, 4]);
    }

    #[test]
    fn load_duplicate_id_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"id\":\"r1\",\"prompt_id\":\"p1\",\"author\":\"a\",\"text\":\"hello\"}\n",
                "{\"id\":\"r1\",\"prompt_id\":\"p1\",\"author\":\"b\",\"text\":\"world\"}\n",
            ),
        )
        .unwrap();
        assert!(matches!(
            load_corpus(&path),
            Err(Error::DuplicateRecordId(_))
        ));
    }

    #[test]
    fn save_then_load_round_trips() {
        let corpus = Corpus::from_records(vec![
            record("r1", "p1", "a", "one two three"),
            record("r2", "p1", "b", "quoted \"text\" with, commas."),
        ])
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        save_corpus(&corpus, &path).unwrap();
        let reloaded = load_corpus(&path).unwrap();
        assert!(reloaded.rejected.is_empty());
        assert_eq!(reloaded.corpus.records(), corpus.records());
    }

    proptest! {
        #[test]
        fn syllables_at_least_one(word in "[a-z]{1,12}") {
            prop_assert!(count_syllables(&word) >= 1);
        }

        #[test]
        fn tokenize_invariants(text in "[ a-zA-Z0-9'.!?]{1,80}") {
            if let Ok(doc) = tokenize(&text) {
                prop_assert_eq!(doc.syllables.len(), doc.tokens.len());
                prop_assert!(doc.sentence_count() >= 1);
                prop_assert!(doc.sentence_count() <= doc.token_count());
                // spans partition 0..len
                let mut cursor = 0usize;
                for &(start, end) in &doc.sentence_spans {
                    prop_assert_eq!(start, cursor);
                    prop_assert!(end > start);
                    cursor = end;
                }
                prop_assert_eq!(cursor, doc.token_count());
            }
        }

        #[test]
        fn tokenize_idempotent_on_joined_tokens(text in "[ a-zA-Z'.!?]{1,80}") {
            if let Ok(doc) = tokenize(&text) {
                let joined = doc.tokens.join(" ");
                let again = tokenize(&joined).unwrap();
                prop_assert_eq!(again.tokens, doc.tokens);
            }
        }
    }
}
