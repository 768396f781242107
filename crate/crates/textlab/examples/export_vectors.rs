//! Export labeled document vectors for downstream tools.
//!
//! Turns every document into a sparse weighted term vector (plain term
//! frequency or tf-idf), tagged with its record id, author, and prompt,
//! and prints the rows as JSON lines — the same format the `vectors`
//! subcommand writes to disk.
//!
//! Run with: `cargo run --example export_vectors`

use textlab::similarity::{export_doc_vectors, VectorWeighting};
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
    let corpus = Corpus::from_records(vec![
        record("r1", "ada", "the cat chased the cat"),
        record("r2", "ada", "the dog chased a ball"),
        record("r3", "bob", "a quiet evening with tea"),
        record("r4", "bob", "tea first then a quiet walk"),
    ])?;

    for weighting in [VectorWeighting::Tf, VectorWeighting::TfIdf] {
        println!("--- {weighting:?} weighting ---");
        for row in export_doc_vectors(&corpus, weighting, None)? {
            println!("{}", serde_json::to_string(&row)?);
        }
    }

    // restrict the export to one author
    let ada_only = export_doc_vectors(&corpus, VectorWeighting::Tf, Some(&["ada".to_string()]))?;
    println!("--- ada only: {} rows ---", ada_only.len());
    Ok(())
}
