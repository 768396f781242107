//! Shipped word lists and their file formats.
//!
//! Two formats, both UTF-8 with `#` comments and blank lines ignored:
//! plain lists carry one word per line; pair lists carry `first,second`
//! per line. Entries are lowercased on load (all analysis operates on
//! lowercased tokens). Every default can be overridden with a flag that
//! points at a file in the same format.

use std::collections::HashSet;
use std::path::Path;

use crate::bias::{NeutralWordSet, PairSet};
use crate::error::{Error, Result};

const EASY_WORDS: &str = include_str!("../data/easy_words.txt");
const STOP_WORDS: &str = include_str!("../data/stopwords.txt");
const GENDER_PAIRS: &str = include_str!("../data/gender_pairs.txt");
const RACE_PAIRS: &str = include_str!("../data/race_pairs.txt");
const NEUTRAL_WORDS: &str = include_str!("../data/neutral_words.txt");

/// Lines that carry content: comments stripped, trimmed, lowercased.
fn content_lines(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines()
        .map(|line| match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        })
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(str::to_lowercase)
}

/// Parse a one-word-per-line list.
pub fn parse_word_list(text: &str) -> Vec<String> {
    content_lines(text).collect()
}

/// Parse a `first,second` pair list.
pub fn parse_pair_list(text: &str) -> Result<Vec<(String, String)>> {
    content_lines(text)
        .map(|line| {
            let mut parts = line.splitn(2, ',');
            match (parts.next(), parts.next()) {
                (Some(first), Some(second))
                    if !first.trim().is_empty() && !second.trim().is_empty() =>
                {
                    Ok((first.trim().to_string(), second.trim().to_string()))
                }
                _ => Err(Error::Format(format!(
                    "pair line must be \"first,second\", got {line:?}"
                ))),
            }
        })
        .collect()
}

/// Read a word-list file.
pub fn load_word_list(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_word_list(&text))
}

/// Read a pair-list file into a named axis.
pub fn load_pair_set(path: impl AsRef<Path>, axis_name: &str) -> Result<PairSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    PairSet::new(axis_name, parse_pair_list(&text)?)
}

/// Read a word-list file into a neutral word set.
pub fn load_neutral_words(path: impl AsRef<Path>) -> Result<NeutralWordSet> {
    NeutralWordSet::new(load_word_list(path)?)
}

/// Common words considered easy to read.
pub fn default_easy_words() -> HashSet<String> {
    parse_word_list(EASY_WORDS).into_iter().collect()
}

/// English stop words for optional marker filtering.
pub fn default_stop_words() -> HashSet<String> {
    parse_word_list(STOP_WORDS).into_iter().collect()
}

/// The shipped gender axis pairs.
pub fn default_gender_pairs() -> PairSet {
    PairSet::new(
        "gender",
        parse_pair_list(GENDER_PAIRS).expect("shipped list parses"),
    )
    .expect("shipped list is valid")
}

/// The shipped race axis pairs.
pub fn default_race_pairs() -> PairSet {
    PairSet::new(
        "race",
        parse_pair_list(RACE_PAIRS).expect("shipped list parses"),
    )
    .expect("shipped list is valid")
}

/// The shipped neutral (occupation) words.
pub fn default_neutral_words() -> NeutralWordSet {
    NeutralWordSet::new(parse_word_list(NEUTRAL_WORDS)).expect("shipped list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_lists_are_well_formed() {
        assert!(default_easy_words().len() > 500);
        assert!(default_stop_words().len() > 100);
        assert_eq!(default_gender_pairs().pairs.len(), 10);
        assert_eq!(default_race_pairs().pairs.len(), 10);
        assert_eq!(default_neutral_words().words.len(), 50);
    }

    #[test]
    fn easy_words_cover_basics() {
        let easy = default_easy_words();
        for word in ["the", "cat", "house", "because"] {
            assert!(easy.contains(word), "missing {word:?}");
        }
    }

    #[test]
    fn gender_axis_starts_with_he_she() {
        let pairs = default_gender_pairs();
        assert_eq!(pairs.pairs[0], ("he".to_string(), "she".to_string()));
        assert_eq!(pairs.axis_name, "gender");
    }

    #[test]
    fn parser_skips_comments_and_case() {
        let words = parse_word_list("# header\nAlpha\n\nbeta # trailing\n");
        assert_eq!(words, vec!["alpha", "beta"]);
    }

    #[test]
    fn pair_parser_accepts_and_rejects() {
        let pairs = parse_pair_list("He,She\n# note\nman,women\n").unwrap();
        assert_eq!(pairs[0], ("he".to_string(), "she".to_string()));
        assert_eq!(pairs.len(), 2);
        assert!(parse_pair_list("lonely\n").is_err());
        assert!(parse_pair_list("a,\n").is_err());
    }

    #[test]
    fn list_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("words.txt");
        std::fs::write(&path, "one\ntwo\n# three\n").unwrap();
        assert_eq!(load_word_list(&path).unwrap(), vec!["one", "two"]);

        let path = dir.path().join("pairs.txt");
        std::fs::write(&path, "aa,bb\ncc,dd\n").unwrap();
        let set = load_pair_set(&path, "custom").unwrap();
        assert_eq!(set.axis_name, "custom");
        assert_eq!(set.pairs.len(), 2);

        assert!(load_word_list(dir.path().join("missing.txt")).is_err());
    }
}
