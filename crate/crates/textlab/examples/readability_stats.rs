//! Readability and corpus measures, per author.
//!
//! Scores one easy and one dense author: Flesch reading ease, consensus
//! grade level, difficult words, reading time, and then whole-corpus
//! measures (unique-word ratio, entropy, syllable profile, MTLD).
//!
//! Run with: `cargo run --example readability_stats`

use textlab::corpus::tokenize;
use textlab::stylometry::{
    author_readability, corpus_measures, flesch_reading_ease, readability_report, text_standard,
};
use textlab::wordlists::default_easy_words;
use textlab::{Corpus, TextRecord};

fn record(id: &str, author: &str, text: &str) -> TextRecord {
    TextRecord {
        id: id.to_string(),
        prompt_id: "p1".to_string(),
        author: author.to_string(),
        text: text.to_string(),
    }
}

fn main() -> textlab::Result<()> {
    let easy_words = default_easy_words();

    // single-document scores
    for text in [
        "The cat sat on the mat. The dog ran fast.",
        "Institutional heterogeneity complicates longitudinal interpretability assessments considerably.",
    ] {
        let doc = tokenize(text)?;
        let report = readability_report(&doc, &easy_words, 238.0)?;
        println!("text: {text}");
        println!(
            "  flesch {:.1}  grade {:.1}  difficult {}  reading {:.1}s  mono/poly {}/{}",
            flesch_reading_ease(&doc),
            text_standard(&doc),
            report.difficult_words,
            report.reading_time_s,
            report.monosyllable_count,
            report.polysyllable_count,
        );
    }

    // per-author aggregates over a corpus
    let corpus = Corpus::from_records(vec![
        record("r1", "plain", "We went to the store. Milk was cheap. Good day."),
        record("r2", "plain", "The rain came late. We got wet. It was fine."),
        record("r3", "plain", "He fixed the sink fast. No leaks now."),
        record("r4", "ornate", "Meandering considerably, the conversation nevertheless illuminated several fundamentally interconnected hypotheses."),
        record("r5", "ornate", "Unquestionably, the originality of the architectural proposition overwhelmed the municipal committee."),
        record("r6", "ornate", "Her dissertation interrogated the epistemological underpinnings of computational creativity."),
    ])?;

    println!("\nper-author aggregates (mean over documents):");
    for author in corpus.authors().map(str::to_string).collect::<Vec<_>>() {
        let stats = author_readability(&corpus, &author, &easy_words, 238.0)?;
        let measures = corpus_measures(&corpus, &author)?;
        println!(
            "  {author:6} flesch {:7.2}  grade {:4.1}  difficult {:4.1}  uniq {:5.1}%  entropy {:.2} bits  mtld {:.1}",
            stats.flesch_reading_ease.mean,
            stats.text_standard_grade.mean,
            stats.difficult_words.mean,
            measures.unique_word_ratio,
            measures.entropy_bits,
            measures.lexical_diversity,
        );
    }
    Ok(())
}
